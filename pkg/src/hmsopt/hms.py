"""Standard Human Mental Search: iterate mental search (Levy perturbations
around each bid), grouping (k-means, winner cluster = best mean value) and
movement (pull the other bids toward the winner's best bid) until the NFE
budget is spent.

Per-iteration stream consumption, in order: the q vector (one integer per
bid) plus the batched Levy draws (mental search), the k-means seed choice
(grouping), one uniform vector per moved bid (movement). All randomness
comes from the single run-owned stream, so a run is reproducible
bit-for-bit from its seed. Candidate evaluations are dispatched in
batches but counted per position, and every phase stops exactly at the
budget cap.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .clustering import ClusterAssignment, cluster_mean_values, full_kmeans
from .core import (
    Bid,
    EvalBudget,
    Objective,
    RngStream,
    RunConfig,
    RunResult,
    evaluate_batch,
    stream_from_seed,
)
from .levy import bulk_steps


@dataclass
class HmsState:
    """Population, best-so-far bid and bookkeeping for one run."""

    population: list[Bid]
    best: Bid
    budget: EvalBudget
    history: list[tuple[int, float]] = field(default_factory=list)
    iteration: int = 0

    @property
    def nfe(self) -> int:
        return self.budget.nfe

    def observe(self, position: np.ndarray, value: float, nfe: int) -> None:
        """Track a freshly evaluated point; record history on improvement."""
        if value < self.best.value:
            self.best = Bid(position.copy(), value)
            self.history.append((nfe, value))


def init_state(objective: Objective, cfg: RunConfig, rng: RngStream) -> HmsState:
    """Uniform population in the box, every bid evaluated and counted."""
    budget = EvalBudget(cfg.nfe_max)
    width = objective.upper - objective.lower
    positions = objective.lower + rng.random((cfg.pop_size, objective.dim)) * width
    values = evaluate_batch(objective, positions, budget)
    population = [Bid(positions[i].copy(), float(values[i])) for i in range(cfg.pop_size)]
    state = HmsState(population, Bid(positions[0].copy(), float(values[0])), budget,
                     history=[(1, float(values[0]))])
    for i in range(1, cfg.pop_size):
        state.observe(positions[i], float(values[i]), i + 1)
    return state


def mental_search_phase(
    state: HmsState, cfg: RunConfig, objective: Objective, rng: RngStream
) -> None:
    """Explore around every bid with q ~ U{q_min..q_max} Levy candidates.

    All candidates of the phase are generated up front (around the
    phase-entry best-so-far, at the phase-entry NFE scale), clamped, and
    evaluated (counted) up to the remaining budget; a bid is replaced by
    its best evaluated candidate only on improvement.
    """
    budget = state.budget
    if budget.exhausted:
        return
    nfe0 = budget.nfe
    qs = rng.integers(cfg.q_min, cfg.q_max + 1, size=len(state.population))
    positions = np.array([b.position for b in state.population])
    steps = bulk_steps(
        positions - state.best.position, qs, nfe0, cfg.nfe_max, rng,
        (cfg.beta_low, cfg.beta_high),
    )
    candidates = np.clip(
        np.repeat(positions, qs, axis=0) + steps, objective.lower, objective.upper
    )
    n_eval = min(len(candidates), budget.nfe_max - nfe0)
    values = evaluate_batch(objective, candidates[:n_eval], budget)
    offset = 0
    for i, bid in enumerate(state.population):
        if offset >= n_eval:
            break
        q = int(qs[i])
        take = min(q, n_eval - offset)
        chunk = values[offset : offset + take]
        j = int(chunk.argmin())
        if chunk[j] < bid.value:
            bid.position = candidates[offset + j].copy()
            bid.value = float(chunk[j])
            state.observe(bid.position, bid.value, nfe0 + offset + j + 1)
        offset += take


def grouping_phase_hms(
    state: HmsState, cfg: RunConfig, rng: RngStream
) -> tuple[int, Bid, ClusterAssignment]:
    """Cluster the population; the winner cluster has the lowest mean value.

    Returns the winner index, a copy of the winner's best bid W, and the
    full assignment.
    """
    positions = np.array([b.position for b in state.population])
    values = np.array([b.value for b in state.population])
    assignment = full_kmeans(positions, cfg.k_clusters, rng)
    means = cluster_mean_values(assignment, values)
    winner = int(means.argmin())
    members = assignment.members(winner)
    w_index = int(members[values[members].argmin()])
    w_bid = state.population[w_index]
    return winner, Bid(w_bid.position.copy(), w_bid.value), assignment


def movement_phase(
    state: HmsState,
    w: Bid,
    exempt_members: np.ndarray,
    c: float,
    rng: RngStream,
    objective: Objective,
) -> None:
    """Pull every non-exempt bid toward W: x_n <- x_n + C*r*(W_n - x_n).

    r is a fresh uniform draw per coordinate per bid, so each mover lands
    between its old position and W (for C=1). Moved bids are clamped and
    re-evaluated immediately (counted); exempt members (the winner cluster
    in standard HMS) stay untouched. Movement stops exactly at the budget
    cap; unmoved bids keep their old position and value.
    """
    budget = state.budget
    exempt = set(int(i) for i in exempt_members)
    movers = [i for i in range(len(state.population)) if i not in exempt]
    if not movers:
        return
    draws = rng.random((len(movers), objective.dim))
    old = np.array([state.population[i].position for i in movers])
    moved = np.clip(
        old + (c * draws) * (w.position[None, :] - old), objective.lower, objective.upper
    )
    nfe0 = budget.nfe
    n_eval = min(len(movers), budget.nfe_max - nfe0)
    values = evaluate_batch(objective, moved[:n_eval], budget)
    for row in range(n_eval):
        bid = state.population[movers[row]]
        bid.position = moved[row].copy()
        bid.value = float(values[row])
        state.observe(bid.position, bid.value, nfe0 + row + 1)


def run_hms(objective: Objective, cfg: RunConfig, rng: RngStream | None = None) -> RunResult:
    """Full HMS run: init, then mental search / grouping / movement until
    the budget is exhausted."""
    if rng is None:
        rng = stream_from_seed(cfg.seed)
    state = init_state(objective, cfg, rng)
    while not state.budget.exhausted:
        mental_search_phase(state, cfg, objective, rng)
        if state.budget.exhausted:
            break
        winner, w, assignment = grouping_phase_hms(state, cfg, rng)
        movement_phase(state, w, assignment.members(winner), cfg.C, rng, objective)
        state.iteration += 1
    best = state.best
    return RunResult(
        best_value=best.value,
        best_position=best.position.copy(),
        error=best.value - objective.optimum_value,
        nfe_used=state.budget.nfe,
        history=tuple(state.history),
    )
