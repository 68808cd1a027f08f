"""Result aggregation and nonparametric comparison: per-function rankings,
rank summaries, pairwise better/worse counts and the two-sided Wilcoxon
signed-rank test.

The Wilcoxon statistic is W = min(W+, W-) over tie-averaged ranks of the
nonzero |differences|. For effective n <= 25 the p-value is exact, from
the null distribution of W+ computed by dynamic programming over the rank
multiset; for larger n a normal approximation with tie and continuity
corrections is used.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, NamedTuple

import numpy as np
from scipy.stats import rankdata

from .core import RunResult

EXACT_CUTOFF = 25


@dataclass
class ResultTable:
    """Functions x algorithms matrix of mean errors."""

    functions: list[str]
    algorithms: list[str]
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        expected = (len(self.functions), len(self.algorithms))
        if self.values.shape != expected:
            raise ValueError(f"values shape {self.values.shape} != {expected}")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("result table contains non-finite entries")
        if np.any(self.values < 0):
            raise ValueError("result table contains negative mean errors")

    def column(self, algorithm: str) -> np.ndarray:
        if algorithm not in self.algorithms:
            raise ValueError(f"unknown algorithm {algorithm!r}")
        return self.values[:, self.algorithms.index(algorithm)]

    @classmethod
    def from_csv(cls, path: str | Path) -> "ResultTable":
        path = Path(path)
        with path.open(newline="") as fh:
            rows = list(csv.reader(fh))
        if not rows or rows[0][:1] != ["function"]:
            raise ValueError(f"{path}: expected header starting with 'function'")
        algorithms = rows[0][1:]
        if not algorithms:
            raise ValueError(f"{path}: no algorithm columns")
        functions = []
        values = []
        for i, row in enumerate(rows[1:], start=2):
            if len(row) != len(algorithms) + 1:
                raise ValueError(f"{path}: row {i} has {len(row)} cells, expected {len(algorithms) + 1}")
            functions.append(row[0])
            try:
                values.append([float(cell) for cell in row[1:]])
            except ValueError as exc:
                raise ValueError(f"{path}: row {i} ({row[0]}): {exc}") from None
        return cls(functions, algorithms, np.array(values))


@dataclass
class RankSummary:
    """Per-algorithm rank statistics over all functions of a table."""

    algorithms: list[str]
    avg_rank: np.ndarray
    best_rank: np.ndarray
    worst_rank: np.ndarray
    std_dev: np.ndarray

    def row(self, algorithm: str) -> tuple[float, float, float, float]:
        i = self.algorithms.index(algorithm)
        return (
            float(self.avg_rank[i]),
            float(self.best_rank[i]),
            float(self.worst_rank[i]),
            float(self.std_dev[i]),
        )


def rank_row(values: np.ndarray) -> np.ndarray:
    """Ascending ranks, 1 = smallest; exact ties share the average rank."""
    values = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(values)):
        raise ValueError("cannot rank non-finite values")
    return rankdata(values, method="average")


def rank_summary(table: ResultTable) -> RankSummary:
    ranks = np.vstack([rank_row(row) for row in table.values])
    if ranks.shape[0] > 1:
        std = ranks.std(axis=0, ddof=1)
    else:
        std = np.zeros(ranks.shape[1])
    return RankSummary(
        algorithms=list(table.algorithms),
        avg_rank=ranks.mean(axis=0),
        best_rank=ranks.min(axis=0),
        worst_rank=ranks.max(axis=0),
        std_dev=std,
    )


def pairwise_compare(table: ResultTable, a: str, b: str) -> tuple[int, int]:
    """(#functions where a beats b, #functions where a loses); ties in neither."""
    va = table.column(a)
    vb = table.column(b)
    return int((va < vb).sum()), int((va > vb).sum())


class WilcoxonResult(NamedTuple):
    statistic: float
    p_value: float
    n_effective: int
    method: str
    degenerate: bool


def _exact_two_sided_p(ranks: np.ndarray, w: float) -> float:
    # Tie-averaged ranks are exact multiples of 0.5; double them to integers
    # and convolve the null distribution of 2*W+ (each rank in/out with p=1/2).
    r2 = np.rint(2.0 * ranks).astype(np.int64)
    total = int(r2.sum())
    counts = np.zeros(total + 1, dtype=np.float64)
    counts[0] = 1.0
    for r in r2:
        shifted = np.zeros_like(counts)
        shifted[r:] = counts[: total + 1 - r]
        counts += shifted
    w2 = int(round(2.0 * w))
    cdf = counts[: w2 + 1].sum() / 2.0 ** len(ranks)
    return min(1.0, 2.0 * cdf)


def _normal_two_sided_p(ranks: np.ndarray, w: float) -> float:
    n = len(ranks)
    mean_w = n * (n + 1) / 4.0
    _, tie_counts = np.unique(ranks, return_counts=True)
    tie_term = float(((tie_counts**3 - tie_counts).sum())) / 48.0
    var_w = n * (n + 1) * (2 * n + 1) / 24.0 - tie_term
    if var_w <= 0:
        return 1.0
    z = (w - mean_w + 0.5) / math.sqrt(var_w)  # w = min(W+, W-) <= mean
    return min(1.0, 2.0 * 0.5 * math.erfc(-z / math.sqrt(2.0)))


def wilcoxon_signed_rank(
    x: np.ndarray, y: np.ndarray, method: str = "auto"
) -> WilcoxonResult:
    """Two-sided Wilcoxon signed-rank test on paired samples.

    Zero differences are discarded. ``method`` is ``"exact"``,
    ``"normal"`` or ``"auto"`` (exact when the effective n is at most
    25). When every difference is zero the result is degenerate with
    p = 1.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError(f"paired samples must be equal-length vectors, got {x.shape} and {y.shape}")
    if len(x) < 5:
        raise ValueError(f"need at least 5 pairs, got {len(x)}")
    if method not in ("auto", "exact", "normal"):
        raise ValueError(f"unknown method {method!r}")
    d = x - y
    d = d[d != 0.0]
    if len(d) == 0:
        return WilcoxonResult(0.0, 1.0, 0, "degenerate", True)
    ranks = rankdata(np.abs(d), method="average")
    w_pos = float(ranks[d > 0].sum())
    w_neg = float(ranks[d < 0].sum())
    w = min(w_pos, w_neg)
    n = len(d)
    if method == "auto":
        method = "exact" if n <= EXACT_CUTOFF else "normal"
    if method == "exact":
        p = _exact_two_sided_p(ranks, w)
    else:
        p = _normal_two_sided_p(ranks, w)
    return WilcoxonResult(w, p, n, method, False)


def mean_error(runs: Iterable[RunResult]) -> tuple[float, float]:
    """Mean and sample standard deviation of the run errors."""
    errors = np.array([r.error for r in runs], dtype=float)
    if errors.size == 0:
        raise ValueError("mean_error requires at least one run")
    std = float(errors.std(ddof=1)) if errors.size > 1 else 0.0
    return float(errors.mean()), std
