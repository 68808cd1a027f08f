"""Shared domain types: candidate solutions, objectives, run configuration,
evaluation budgeting and deterministic seeded random streams.

All algorithms in this package draw randomness exclusively from an
:data:`RngStream` (a numpy ``Generator`` over the counter-based Philox
bit generator), so a run is fully determined by its stream. Streams for
independent runs are derived by hashing ``(master_seed, algorithm_id,
function_id, run_index)`` through ``numpy.random.SeedSequence``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

RngStream = np.random.Generator


class BudgetExhausted(RuntimeError):
    """Raised when an evaluation is requested after the NFE budget is spent."""


@dataclass
class Bid:
    """A candidate solution: position vector plus its cached objective value."""

    position: np.ndarray
    value: float


@dataclass(frozen=True)
class Objective:
    """An evaluatable minimization target with box bounds and known optimum.

    Parameters
    ----------
    name : str
        Identifier used in result tables and CSV output.
    dim : int
        Search-space dimensionality.
    lower, upper : ndarray
        Per-coordinate box bounds, ``lower[j] < upper[j]``.
    optimum_value : float
        Known global minimum value; errors are reported relative to it.
    eval_fn : callable
        Maps a position vector to a float. Must satisfy
        ``eval_fn(x) >= optimum_value`` for every in-bounds ``x``.
    """

    name: str
    dim: int
    lower: np.ndarray
    upper: np.ndarray
    optimum_value: float
    eval_fn: Callable[[np.ndarray], float]

    def __post_init__(self):
        lower = np.asarray(self.lower, dtype=float)
        upper = np.asarray(self.upper, dtype=float)
        if self.dim < 1:
            raise ValueError(f"dim must be >= 1, got {self.dim}")
        if lower.shape != (self.dim,) or upper.shape != (self.dim,):
            raise ValueError("bounds must be vectors of length dim")
        if not np.all(lower < upper):
            raise ValueError("lower bounds must be strictly below upper bounds")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    def __call__(self, x: np.ndarray) -> float:
        return self.eval_fn(x)


@dataclass(frozen=True)
class RunConfig:
    """All HMS / MCS-HMS parameters for a single run.

    Defaults follow the standard published settings: 5 clusters, 2 to 5
    mental processes per bid, movement constant C = 1. ``beta_low`` /
    ``beta_high`` bound the Levy stability exponent drawn per mental step;
    the interval must stay inside (0, 2) because the Levy scale factor
    degenerates at beta = 2.
    """

    pop_size: int = 50
    nfe_max: int = 100_000
    k_clusters: int = 5
    q_min: int = 2
    q_max: int = 5
    C: float = 1.0
    seed: int = 0
    beta_low: float = 0.3
    beta_high: float = 1.99

    def __post_init__(self):
        if self.pop_size < 1:
            raise ValueError(f"pop_size must be positive, got {self.pop_size}")
        if self.nfe_max < self.pop_size:
            raise ValueError(
                "nfe_max must cover at least the initial population "
                f"({self.nfe_max} < {self.pop_size})"
            )
        if not 2 <= self.q_min <= self.q_max:
            raise ValueError(f"need 2 <= q_min <= q_max, got [{self.q_min}, {self.q_max}]")
        if not 1 <= self.k_clusters <= self.pop_size:
            raise ValueError(f"k_clusters must be in [1, pop_size], got {self.k_clusters}")
        if not 0.0 < self.beta_low <= self.beta_high < 2.0:
            raise ValueError(
                f"need 0 < beta_low <= beta_high < 2, got [{self.beta_low}, {self.beta_high}]"
            )


@dataclass(frozen=True)
class RunResult:
    """Outcome of one optimization run.

    ``history`` holds ``(nfe, best_value)`` pairs recorded at every
    improvement of the best-so-far value, so it is non-increasing in its
    second component.
    """

    best_value: float
    best_position: np.ndarray
    error: float
    nfe_used: int
    history: tuple[tuple[int, float], ...]


class EvalBudget:
    """Mutable evaluation counter with a hard cap at ``nfe_max``."""

    __slots__ = ("nfe", "nfe_max")

    def __init__(self, nfe_max: int):
        if nfe_max < 1:
            raise ValueError(f"nfe_max must be positive, got {nfe_max}")
        self.nfe = 0
        self.nfe_max = nfe_max

    @property
    def exhausted(self) -> bool:
        return self.nfe >= self.nfe_max

    def __repr__(self):
        return f"EvalBudget(nfe={self.nfe}, nfe_max={self.nfe_max})"


def clamp(position: np.ndarray, objective: Objective) -> np.ndarray:
    """Project ``position`` coordinate-wise into the objective's box."""
    position = np.asarray(position, dtype=float)
    if position.shape != (objective.dim,):
        raise ValueError(
            f"position has shape {position.shape}, expected ({objective.dim},)"
        )
    return np.clip(position, objective.lower, objective.upper)


def evaluate_counted(objective: Objective, position: np.ndarray, budget: EvalBudget) -> float:
    """Evaluate ``objective`` at ``position``, counting one NFE against ``budget``.

    Raises
    ------
    BudgetExhausted
        If the budget is already spent; the counter is not incremented and
        the objective is not evaluated.
    """
    if budget.nfe >= budget.nfe_max:
        raise BudgetExhausted(f"NFE budget of {budget.nfe_max} already spent")
    value = objective.eval_fn(position)
    budget.nfe += 1
    return value


def evaluate_batch(objective: Objective, positions: np.ndarray, budget: EvalBudget) -> np.ndarray:
    """Evaluate ``m`` stacked positions, counting ``m`` NFE against ``budget``.

    Equivalent to ``m`` calls to :func:`evaluate_counted`; the caller must
    slice the batch to the remaining budget first.

    Raises
    ------
    BudgetExhausted
        If the batch does not fit in the remaining budget; nothing is
        evaluated or counted.
    """
    positions = np.asarray(positions, dtype=float)
    m = positions.shape[0]
    if m == 0:
        return np.empty(0)
    if budget.nfe + m > budget.nfe_max:
        raise BudgetExhausted(
            f"batch of {m} exceeds remaining budget {budget.nfe_max - budget.nfe}"
        )
    batch_fn = getattr(objective.eval_fn, "batch", None)
    if batch_fn is not None:
        values = np.asarray(batch_fn(positions), dtype=float)
    else:
        values = np.array([float(objective.eval_fn(row)) for row in positions])
    budget.nfe += m
    return values


def derive_seed(master_seed: int, algorithm_id: int, function_id: int, run_index: int) -> int:
    """Hash ``(master_seed, algorithm_id, function_id, run_index)`` to a 64-bit key.

    Uses ``numpy.random.SeedSequence`` with the tuple as spawn key, so
    distinct tuples map to distinct (with overwhelming probability),
    platform-independent keys.
    """
    seq = np.random.SeedSequence(master_seed, spawn_key=(algorithm_id, function_id, run_index))
    return int(seq.generate_state(1, np.uint64)[0])


def derive_stream(
    master_seed: int, algorithm_id: int, function_id: int, run_index: int
) -> RngStream:
    """Deterministic per-run stream for the given (seed, algorithm, function, run)."""
    key = derive_seed(master_seed, algorithm_id, function_id, run_index)
    return np.random.Generator(np.random.Philox(key=key))


def stream_from_seed(seed: int) -> RngStream:
    """Stream keyed directly by ``seed`` (Philox counter-based generator)."""
    return np.random.Generator(np.random.Philox(key=seed))
