"""Population grouping via k-means: full Lloyd iteration for standard HMS
and a single seed-assign-update pass for the fast variant.

Conventions fixed for determinism:

* seeds are ``k`` distinct population members chosen uniformly without
  replacement (never free points in the box),
* distance ties assign to the lowest cluster index,
* an empty cluster is repaired by donating the farthest-from-centroid
  member of the currently largest cluster, then recomputing both centroids.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import RngStream


@dataclass
class ClusterAssignment:
    """Labels in ``[0, k)`` for each row plus per-cluster centroids."""

    labels: np.ndarray
    centroids: np.ndarray
    k: int

    def members(self, cluster: int) -> np.ndarray:
        return np.flatnonzero(self.labels == cluster)


def _check_args(n: int, k: int) -> None:
    if k <= 0:
        raise ValueError(f"k must be positive, got {k}")
    if k > n:
        raise ValueError(f"k={k} exceeds number of points n={n}")


def _nearest(positions: np.ndarray, centers: np.ndarray) -> np.ndarray:
    # argmin returns the first (lowest-index) minimizer, which is the tie rule
    d2 = ((positions[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
    return d2.argmin(axis=1)


def _update_with_repair(
    positions: np.ndarray, labels: np.ndarray, k: int
) -> tuple[np.ndarray, np.ndarray]:
    """Recompute centroids as member means; repair empty clusters by donation."""
    n, dim = positions.shape
    labels = labels.copy()
    counts = np.bincount(labels, minlength=k)
    centroids = np.zeros((k, dim))
    for c in range(k):
        if counts[c]:
            centroids[c] = positions[labels == c].mean(axis=0)
    for c in np.flatnonzero(counts == 0):
        donor = int(counts.argmax())
        members = np.flatnonzero(labels == donor)
        d2 = ((positions[members] - centroids[donor]) ** 2).sum(axis=1)
        far = members[int(d2.argmax())]
        labels[far] = c
        counts[donor] -= 1
        counts[c] = 1
        centroids[donor] = positions[labels == donor].mean(axis=0)
        centroids[c] = positions[far]
    return labels, centroids


def one_step_kmeans(positions: np.ndarray, k: int, rng: RngStream) -> ClusterAssignment:
    """Single-pass k-means: random-member seeds, one assignment, one centroid update."""
    positions = np.asarray(positions, dtype=float)
    _check_args(len(positions), k)
    seeds = rng.choice(len(positions), size=k, replace=False)
    labels = _nearest(positions, positions[seeds])
    labels, centroids = _update_with_repair(positions, labels, k)
    return ClusterAssignment(labels, centroids, k)


def full_kmeans(
    positions: np.ndarray,
    k: int,
    rng: RngStream,
    max_iter: int = 100,
    tol: float = 1e-9,
) -> ClusterAssignment:
    """Lloyd k-means from random-member seeds.

    Stops when the assignment is unchanged, the largest centroid movement
    falls below ``tol``, or after ``max_iter`` assign-update rounds.
    ``max_iter=1`` coincides with :func:`one_step_kmeans` for the same
    stream.
    """
    positions = np.asarray(positions, dtype=float)
    _check_args(len(positions), k)
    if max_iter < 1:
        raise ValueError(f"max_iter must be >= 1, got {max_iter}")
    seeds = rng.choice(len(positions), size=k, replace=False)
    labels = _nearest(positions, positions[seeds])
    labels, centroids = _update_with_repair(positions, labels, k)
    for _ in range(max_iter - 1):
        new_labels = _nearest(positions, centroids)
        if np.array_equal(new_labels, labels):
            break
        labels, new_centroids = _update_with_repair(positions, new_labels, k)
        shift = float(np.abs(new_centroids - centroids).max())
        centroids = new_centroids
        if shift < tol:
            break
    return ClusterAssignment(labels, centroids, k)


def cluster_mean_values(assignment: ClusterAssignment, values: np.ndarray) -> np.ndarray:
    """Mean objective value per cluster (no empty clusters after repair)."""
    values = np.asarray(values, dtype=float)
    if values.shape != assignment.labels.shape:
        raise ValueError("values length does not match labels")
    counts = np.bincount(assignment.labels, minlength=assignment.k)
    sums = np.bincount(assignment.labels, weights=values, minlength=assignment.k)
    return sums / counts
