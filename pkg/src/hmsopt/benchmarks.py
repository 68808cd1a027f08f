"""Benchmark objectives: ten classical base functions plus seeded
shift/rotation/bias wrappers emulating the unimodal and multimodal
difficulty classes of the usual competition suites.

Every base function has global minimum value 0 and reduces over the last
axis, so a function evaluates either a single position vector or an
``m x D`` batch of candidates in one call. The wrapped objective evaluates
``base(R @ (x - o) + c) + bias`` where ``c`` is the base's canonical
optimum, so the wrapped optimum always sits exactly at the shift vector
``o`` with value ``bias``. Shifts are confined to the central 80% of the
box so the optimum never touches the boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import Objective, RngStream, stream_from_seed

# Location/value of max_w w*sin(sqrt(w)) on [0, 500]; fixes the additive
# constant so the deceptive sine landscape has minimum exactly 0.
_SCHWEFEL_X = 420.96874635998205
_SCHWEFEL_C = _SCHWEFEL_X * math.sin(math.sqrt(_SCHWEFEL_X))

_TWO_PI = 2.0 * math.pi

_index_weights_cache: dict[int, np.ndarray] = {}


def _index_weights(size: int) -> np.ndarray:
    weights = _index_weights_cache.get(size)
    if weights is None:
        weights = np.arange(1.0, size + 1.0)
        _index_weights_cache[size] = weights
    return weights


def sphere(z: np.ndarray):
    return (z * z).sum(axis=-1)


def rosenbrock(z: np.ndarray):
    a = z[..., :-1]
    b = z[..., 1:]
    return (100.0 * (b - a * a) ** 2 + (1.0 - a) ** 2).sum(axis=-1)


def rastrigin(z: np.ndarray):
    return 10.0 * z.shape[-1] + (z * z - 10.0 * np.cos(_TWO_PI * z)).sum(axis=-1)


def ackley(z: np.ndarray):
    d = z.shape[-1]
    rms = np.sqrt((z * z).sum(axis=-1) / d)
    mean_cos = np.cos(_TWO_PI * z).sum(axis=-1) / d
    return -20.0 * np.exp(-0.2 * rms) - np.exp(mean_cos) + 20.0 + math.e


def griewank(z: np.ndarray):
    idx = np.sqrt(_index_weights(z.shape[-1]))
    return (z * z).sum(axis=-1) / 4000.0 - np.cos(z / idx).prod(axis=-1) + 1.0


def zakharov(z: np.ndarray):
    s = 0.5 * (z @ _index_weights(z.shape[-1]))
    return (z * z).sum(axis=-1) + s**2 + s**4


def schwefel_2_26(z: np.ndarray):
    """Deceptive sine landscape, minimum 0 at 420.9687... per coordinate.

    Outside the canonical box the raw form dips below its in-box minimum,
    so coordinates beyond +-500 are folded back with a quadratic penalty
    (the usual competition-suite treatment), keeping the function
    nonnegative on all of R^D. Inside the box this is the textbook value.
    """
    d = z.shape[-1]
    abs_z = np.abs(z)
    if abs_z.max() <= 500.0:
        return _SCHWEFEL_C * d - (z * np.sin(np.sqrt(abs_z))).sum(axis=-1)
    w_high = 500.0 - np.mod(z, 500.0)
    w_low = np.mod(abs_z, 500.0) - 500.0
    g = np.where(
        abs_z <= 500.0,
        z * np.sin(np.sqrt(abs_z)),
        np.where(
            z > 500.0,
            w_high * np.sin(np.sqrt(np.abs(w_high))) - (z - 500.0) ** 2 / (10000.0 * d),
            w_low * np.sin(np.sqrt(np.abs(w_low))) - (z + 500.0) ** 2 / (10000.0 * d),
        ),
    )
    return _SCHWEFEL_C * d - g.sum(axis=-1)


def levy_fn(z: np.ndarray):
    w = 1.0 + (z - 1.0) / 4.0
    head = np.sin(math.pi * w[..., 0]) ** 2
    body = ((w[..., :-1] - 1.0) ** 2 * (1.0 + 10.0 * np.sin(math.pi * w[..., :-1] + 1.0) ** 2)).sum(
        axis=-1
    )
    tail = (w[..., -1] - 1.0) ** 2 * (1.0 + np.sin(_TWO_PI * w[..., -1]) ** 2)
    return head + body + tail


def bent_cigar(z: np.ndarray):
    return z[..., 0] ** 2 + 1.0e6 * (z[..., 1:] ** 2).sum(axis=-1)


def sum_diff_powers(z: np.ndarray):
    powers = 1.0 + _index_weights(z.shape[-1])
    return (np.abs(z) ** powers).sum(axis=-1)


@dataclass(frozen=True)
class _BaseSpec:
    fn: Callable[[np.ndarray], np.ndarray]
    bound: float
    optimum: float  # canonical optimum is optimum * ones(dim)
    multimodal: bool


BASE_FUNCTIONS: dict[str, _BaseSpec] = {
    "sphere": _BaseSpec(sphere, 100.0, 0.0, False),
    "rosenbrock": _BaseSpec(rosenbrock, 30.0, 1.0, False),
    "rastrigin": _BaseSpec(rastrigin, 100.0, 0.0, True),
    "ackley": _BaseSpec(ackley, 100.0, 0.0, True),
    "griewank": _BaseSpec(griewank, 100.0, 0.0, True),
    "zakharov": _BaseSpec(zakharov, 100.0, 0.0, False),
    "schwefel_2_26": _BaseSpec(schwefel_2_26, 500.0, _SCHWEFEL_X, True),
    "levy_fn": _BaseSpec(levy_fn, 10.0, 1.0, True),
    "bent_cigar": _BaseSpec(bent_cigar, 100.0, 0.0, False),
    "sum_diff_powers": _BaseSpec(sum_diff_powers, 100.0, 0.0, False),
}

SUITE_ORDER = (
    "sphere",
    "rosenbrock",
    "rastrigin",
    "ackley",
    "griewank",
    "zakharov",
    "schwefel_2_26",
    "levy_fn",
    "bent_cigar",
    "sum_diff_powers",
)

SUITE_DIMS = (2, 10, 30, 50, 100)


def base_function(name: str, x: np.ndarray) -> float:
    """Evaluate a base function by name at a single position ``x``."""
    if name not in BASE_FUNCTIONS:
        raise ValueError(f"unknown base function {name!r}")
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size < 1:
        raise ValueError("x must be a vector of length >= 1")
    return float(BASE_FUNCTIONS[name].fn(x))


def random_rotation(dim: int, rng: RngStream) -> np.ndarray:
    """Random orthogonal matrix from modified Gram-Schmidt on normal draws."""
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    while True:
        m = rng.standard_normal((dim, dim))
        q = np.empty((dim, dim))
        ok = True
        for j in range(dim):
            v = m[:, j].copy()
            for i in range(j):
                v -= (q[:, i] @ v) * q[:, i]
            norm = float(np.linalg.norm(v))
            if norm < 1e-12:  # numerically dependent column: resample
                ok = False
                break
            q[:, j] = v / norm
        if ok:
            return q


@dataclass(frozen=True)
class TransformedObjective:
    """Shift/rotate/bias wrapper around a base function.

    ``__call__(x) = base(R @ (x - shift) + pre_shift) + bias`` where
    ``pre_shift`` is the base's canonical optimum, so the minimum value
    ``bias`` is attained exactly at ``shift``. ``batch`` evaluates an
    ``m x D`` matrix of positions in one shot.
    """

    base_name: str
    shift: np.ndarray
    rotation: np.ndarray | None
    bias: float

    def __post_init__(self):
        spec = BASE_FUNCTIONS[self.base_name]
        object.__setattr__(self, "_fn", spec.fn)
        object.__setattr__(self, "_pre_shift", spec.optimum if spec.optimum != 0.0 else None)

    def _transform(self, x: np.ndarray) -> np.ndarray:
        z = x - self.shift
        if self.rotation is not None:
            z = z @ self.rotation.T
        if self._pre_shift is not None:
            z = z + self._pre_shift
        return z

    def __call__(self, x: np.ndarray) -> float:
        return float(self._fn(self._transform(x)) + self.bias)

    def batch(self, x: np.ndarray) -> np.ndarray:
        return self._fn(self._transform(x)) + self.bias

    def __getstate__(self):
        return (self.base_name, self.shift, self.rotation, self.bias)

    def __setstate__(self, state):
        base_name, shift, rotation, bias = state
        object.__setattr__(self, "base_name", base_name)
        object.__setattr__(self, "shift", shift)
        object.__setattr__(self, "rotation", rotation)
        object.__setattr__(self, "bias", bias)
        self.__post_init__()


def make_objective(
    base_name: str,
    dim: int,
    shift: np.ndarray,
    rotation: np.ndarray | None,
    bias: float,
    name: str | None = None,
) -> Objective:
    spec = BASE_FUNCTIONS[base_name]
    return Objective(
        name=name or base_name,
        dim=dim,
        lower=np.full(dim, -spec.bound),
        upper=np.full(dim, spec.bound),
        optimum_value=bias,
        eval_fn=TransformedObjective(base_name, np.asarray(shift, dtype=float), rotation, bias),
    )


def make_suite(name: str, dim: int, seed: int) -> list[Objective]:
    """Build the named benchmark suite, deterministically from ``seed``.

    ``classic10`` wraps the ten base functions with a seeded shift drawn
    uniformly from the central 80% of each box, a seeded rotation for the
    multimodal ones, and bias 100*(index+1).
    """
    if name != "classic10":
        raise ValueError(f"unknown suite {name!r}")
    if dim not in SUITE_DIMS:
        raise ValueError(f"dim must be one of {SUITE_DIMS}, got {dim}")
    rng = stream_from_seed(seed)
    suite = []
    for idx, base_name in enumerate(SUITE_ORDER):
        spec = BASE_FUNCTIONS[base_name]
        width = 2.0 * spec.bound
        shift = -spec.bound + 0.1 * width + 0.8 * width * rng.random(dim)
        rotation = random_rotation(dim, rng) if spec.multimodal else None
        bias = 100.0 * (idx + 1)
        suite.append(
            make_objective(
                base_name, dim, shift, rotation, bias,
                name=f"f{idx + 1:02d}_{base_name}",
            )
        )
    return suite
