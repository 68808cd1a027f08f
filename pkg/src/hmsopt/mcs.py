"""Multi-cluster selection variant of HMS.

Instead of committing to the cluster with the best mean value, every
cluster contributes its best bid to a memory rebuilt each iteration; the
movement target is drawn uniformly from that memory, so any region of the
search space can become the promising area. Grouping uses the single-pass
k-means for speed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .clustering import ClusterAssignment, one_step_kmeans
from .core import Bid, Objective, RngStream, RunConfig, RunResult, stream_from_seed
from .hms import HmsState, init_state, mental_search_phase, movement_phase


@dataclass(frozen=True)
class ClusterMemory:
    """One (cluster_id, best bid) entry per cluster, rebuilt every iteration.

    ``indices`` tracks where each entry lives in the population, so the
    movement phase can keep the memory bids in place.
    """

    entries: tuple[tuple[int, Bid], ...]
    indices: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.entries)


def build_memory(assignment: ClusterAssignment, population: list[Bid]) -> ClusterMemory:
    """Collect each cluster's lowest-value bid (ties: lowest population index)."""
    values = np.array([b.value for b in population])
    entries = []
    indices = []
    for c in range(assignment.k):
        members = assignment.members(c)
        best = int(members[values[members].argmin()])
        bid = population[best]
        entries.append((c, Bid(bid.position.copy(), bid.value)))
        indices.append(best)
    return ClusterMemory(tuple(entries), tuple(indices))


def select_target(memory: ClusterMemory, rng: RngStream) -> tuple[Bid, int]:
    """Uniform choice over the memory; returns (W, promising cluster).

    A one-entry memory is returned directly without consuming a draw, which
    keeps the k=1 run trace-identical to standard HMS.
    """
    if len(memory.entries) == 0:
        raise ValueError("cluster memory is empty")
    if len(memory.entries) == 1:
        choice = 0
    else:
        choice = int(rng.integers(0, len(memory.entries)))
    cluster, bid = memory.entries[choice]
    return Bid(bid.position.copy(), bid.value), cluster


def run_mcs_hms(
    objective: Objective, cfg: RunConfig, rng: RngStream | None = None
) -> RunResult:
    """MCS-HMS run: same loop as HMS but with one-step k-means grouping and
    a movement target drawn uniformly from the per-cluster best bids.

    Movement keeps the selected cluster in place and also the memory bids
    themselves, so every cluster's best survives the iteration.
    """
    if rng is None:
        rng = stream_from_seed(cfg.seed)
    state: HmsState = init_state(objective, cfg, rng)
    while not state.budget.exhausted:
        mental_search_phase(state, cfg, objective, rng)
        if state.budget.exhausted:
            break
        positions = np.array([b.position for b in state.population])
        assignment = one_step_kmeans(positions, cfg.k_clusters, rng)
        memory = build_memory(assignment, state.population)
        w, promising = select_target(memory, rng)
        exempt = np.union1d(assignment.members(promising), np.array(memory.indices, dtype=int))
        movement_phase(state, w, exempt, cfg.C, rng, objective)
        state.iteration += 1
    best = state.best
    return RunResult(
        best_value=best.value,
        best_position=best.position.copy(),
        error=best.value - objective.optimum_value,
        nfe_used=state.budget.nfe,
        history=tuple(state.history),
    )
