"""Canonical global-best PSO baseline.

Configured to the usual comparison settings: inertia falling linearly from
1 to 0 over the evaluation budget, cognitive and social constants both 2.
Velocities are clamped to a fraction of the box width; positions are
clamped to the box.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    Bid,
    EvalBudget,
    Objective,
    RngStream,
    RunResult,
    evaluate_batch,
    stream_from_seed,
)


@dataclass(frozen=True)
class PsoConfig:
    pop_size: int = 50
    nfe_max: int = 100_000
    seed: int = 0
    w_start: float = 1.0
    w_end: float = 0.0
    c1: float = 2.0
    c2: float = 2.0
    v_max_fraction: float = 0.2

    def __post_init__(self):
        if self.pop_size < 1:
            raise ValueError(f"pop_size must be positive, got {self.pop_size}")
        if self.nfe_max < self.pop_size:
            raise ValueError(
                "nfe_max must cover at least the initial population "
                f"({self.nfe_max} < {self.pop_size})"
            )
        if not 0.0 < self.v_max_fraction:
            raise ValueError(f"v_max_fraction must be positive, got {self.v_max_fraction}")


def inertia(nfe: int, nfe_max: int, w_start: float = 1.0, w_end: float = 0.0) -> float:
    """Inertia weight interpolated linearly over the evaluation budget."""
    if not 0 <= nfe <= nfe_max:
        raise ValueError(f"nfe must lie in [0, {nfe_max}], got {nfe}")
    return w_start + (w_end - w_start) * (nfe / nfe_max)


def run_pso(objective: Objective, cfg: PsoConfig, rng: RngStream | None = None) -> RunResult:
    """Synchronous global-best PSO with NFE-based inertia schedule.

    Per iteration, with w interpolated at the iteration's entry NFE:
    ``v <- clip(w*v + c1*r1*(pbest - x) + c2*r2*(gbest - x))`` then
    ``x <- clamp(x + v)`` and one counted evaluation per particle;
    pbest and gbest are updated from the fresh values.
    """
    if rng is None:
        rng = stream_from_seed(cfg.seed)
    budget = EvalBudget(cfg.nfe_max)
    dim = objective.dim
    lower, upper = objective.lower, objective.upper
    v_max = cfg.v_max_fraction * (upper - lower)

    positions = lower + rng.random((cfg.pop_size, dim)) * (upper - lower)
    velocities = np.zeros((cfg.pop_size, dim))
    pbest = positions.copy()
    pbest_val = evaluate_batch(objective, positions, budget)
    history: list[tuple[int, float]] = []
    best = Bid(positions[0].copy(), np.inf)
    for i in range(cfg.pop_size):
        if pbest_val[i] < best.value:
            best = Bid(positions[i].copy(), float(pbest_val[i]))
            history.append((i + 1, best.value))

    while not budget.exhausted:
        w = inertia(budget.nfe, cfg.nfe_max, cfg.w_start, cfg.w_end)
        r1 = rng.random((cfg.pop_size, dim))
        r2 = rng.random((cfg.pop_size, dim))
        velocities = np.clip(
            w * velocities
            + (cfg.c1 * r1) * (pbest - positions)
            + (cfg.c2 * r2) * (best.position[None, :] - positions),
            -v_max,
            v_max,
        )
        positions = np.clip(positions + velocities, lower, upper)
        nfe0 = budget.nfe
        n_eval = min(cfg.pop_size, budget.nfe_max - nfe0)
        values = evaluate_batch(objective, positions[:n_eval], budget)
        for i in range(n_eval):
            if values[i] < pbest_val[i]:
                pbest_val[i] = values[i]
                pbest[i] = positions[i]
                if values[i] < best.value:
                    best = Bid(positions[i].copy(), float(values[i]))
                    history.append((nfe0 + i + 1, best.value))

    return RunResult(
        best_value=best.value,
        best_position=best.position.copy(),
        error=best.value - objective.optimum_value,
        nfe_used=budget.nfe,
        history=tuple(history),
    )
