"""Mantegna-style Levy-flight step generation for the mental-search operator.

A Levy step per coordinate is ``0.01 * u / |v|**(1/beta)`` with
``u ~ N(0, sigma_u(beta)^2)`` and ``v ~ N(0, 1)``. The closed form for
``sigma_u`` is

    sigma_u(beta) = ( Gamma(1+beta) * sin(pi*beta/2)
                      / (Gamma((1+beta)/2) * beta * 2**((beta-1)/2)) )**(1/beta)

which is positive and continuous on (0, 2) and degenerates to 0 as
beta -> 2. The stability exponent is therefore drawn from a real
sub-interval of (0, 2) rather than from integers.

Draw order is part of the deterministic contract: ``mental_step`` draws
beta first, then u (all coordinates), then v (all coordinates); the
batched ``mental_steps`` draws all betas, then the u matrix, then the
v matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gamma as scipy_gamma

from .core import RngStream

# |v| below this underflows |v|**(1/beta) to 0 for small beta; redraw instead.
_V_FLOOR = 1e-300


def gamma_fn(z: float) -> float:
    """Gamma function on the positive reals."""
    if z <= 0:
        raise ValueError(f"gamma_fn requires z > 0, got {z}")
    return math.gamma(z)


def sigma_u(beta: float) -> float:
    """Scale of the numerator normal in the Mantegna construction."""
    if not 0.0 < beta < 2.0:
        raise ValueError(f"beta must lie in (0, 2), got {beta}")
    num = math.gamma(1.0 + beta) * math.sin(math.pi * beta / 2.0)
    den = math.gamma((1.0 + beta) / 2.0) * beta * 2.0 ** ((beta - 1.0) / 2.0)
    return (num / den) ** (1.0 / beta)


@dataclass(frozen=True)
class LevyParams:
    """Frozen sampler parameters for a fixed stability exponent.

    ``sigma_u`` is filled in from the closed form when not given, and a
    supplied value must agree with it to 1e-10 relative accuracy.
    """

    beta: float
    sigma_u: float | None = None
    sigma_v: float = 1.0

    def __post_init__(self):
        expected = sigma_u(self.beta)
        if self.sigma_u is None:
            object.__setattr__(self, "sigma_u", expected)
        elif abs(self.sigma_u - expected) > 1e-10 * expected:
            raise ValueError(f"sigma_u {self.sigma_u} inconsistent with beta {self.beta}")
        if self.sigma_v != 1.0:
            raise ValueError(f"sigma_v must be 1, got {self.sigma_v}")

    @classmethod
    def from_beta(cls, beta: float) -> "LevyParams":
        return cls(beta=beta)


def _safe_normals(rng: RngStream, n: int) -> np.ndarray:
    out = rng.standard_normal(n)
    while True:
        tiny = np.abs(out) < _V_FLOOR
        if not tiny.any():
            return out
        out[tiny] = rng.standard_normal(int(tiny.sum()))


def levy_vector(rng: RngStream, beta: float, dim: int) -> np.ndarray:
    """One Levy step of length ``dim``: ``0.01 * u / |v|**(1/beta)`` per coordinate."""
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    su = sigma_u(beta)
    u = su * rng.standard_normal(dim)
    v = _safe_normals(rng, dim)
    return 0.01 * u / np.abs(v) ** (1.0 / beta)


def nfe_scale(nfe: int, nfe_max: int) -> float:
    """Step shrink factor, linear from 2 at nfe=0 down to 0 at nfe=nfe_max."""
    if not 0 <= nfe <= nfe_max:
        raise ValueError(f"nfe must lie in [0, {nfe_max}], got {nfe}")
    return 2.0 - nfe * (2.0 / nfe_max)


def mental_step(
    x: np.ndarray,
    x_best: np.ndarray,
    nfe: int,
    nfe_max: int,
    rng: RngStream,
    beta_range: tuple[float, float],
) -> np.ndarray:
    """One mental-search displacement around ``x``.

    Returns ``(2 - nfe*2/nfe_max) * levy ⊙ (x - x_best)`` with the Levy
    step drawn for a beta sampled uniformly from ``beta_range``. Zero when
    ``x == x_best`` or when the budget is fully spent.
    """
    factor = nfe_scale(nfe, nfe_max)
    beta = float(rng.uniform(beta_range[0], beta_range[1]))
    return factor * levy_vector(rng, beta, len(x)) * (np.asarray(x) - np.asarray(x_best))


def mental_steps(
    x: np.ndarray,
    x_best: np.ndarray,
    nfe: int,
    nfe_max: int,
    rng: RngStream,
    beta_range: tuple[float, float],
    count: int,
) -> np.ndarray:
    """``count`` mental-search displacements as a ``count x dim`` matrix.

    Batched equivalent of ``count`` calls to :func:`mental_step` sharing the
    call-time NFE; each row has its own beta and its own normal draws.
    """
    factor = nfe_scale(nfe, nfe_max)
    dim = len(x)
    betas = rng.uniform(beta_range[0], beta_range[1], size=count)
    sus = np.array([sigma_u(b) for b in betas])
    u = rng.standard_normal((count, dim))
    v = rng.standard_normal((count, dim))
    abs_v = np.abs(v)
    while float(abs_v.min()) < _V_FLOOR:
        tiny = abs_v < _V_FLOOR
        v[tiny] = rng.standard_normal(int(tiny.sum()))
        abs_v = np.abs(v)
    displacement = (0.01 * factor) * (np.asarray(x) - np.asarray(x_best))
    return (sus[:, None] * u) / abs_v ** (1.0 / betas)[:, None] * displacement[None, :]


def _sigma_u_bulk(betas: np.ndarray) -> np.ndarray:
    # vectorized closed form; may differ from the scalar path by an ulp
    num = scipy_gamma(1.0 + betas) * np.sin((math.pi / 2.0) * betas)
    den = scipy_gamma((1.0 + betas) / 2.0) * betas * 2.0 ** ((betas - 1.0) / 2.0)
    return (num / den) ** (1.0 / betas)


def bulk_steps(
    displacements: np.ndarray,
    qs: np.ndarray,
    nfe: int,
    nfe_max: int,
    rng: RngStream,
    beta_range: tuple[float, float],
) -> np.ndarray:
    """Levy steps for one whole mental-search phase.

    Row ``i`` of ``displacements`` (a bid's ``x - x_best``) is expanded into
    ``qs[i]`` candidate steps; all share the phase-entry NFE scale factor.
    Draw order: betas (all candidates), then the u matrix, then the v
    matrix.
    """
    factor = nfe_scale(nfe, nfe_max)
    total = int(qs.sum())
    dim = displacements.shape[1]
    betas = rng.uniform(beta_range[0], beta_range[1], size=total)
    sus = _sigma_u_bulk(betas)
    u = rng.standard_normal((total, dim))
    v = rng.standard_normal((total, dim))
    abs_v = np.abs(v)
    while total and float(abs_v.min()) < _V_FLOOR:
        tiny = abs_v < _V_FLOOR
        v[tiny] = rng.standard_normal(int(tiny.sum()))
        abs_v = np.abs(v)
    scaled = (0.01 * factor) * np.repeat(displacements, qs, axis=0)
    return (sus[:, None] * u) / abs_v ** (1.0 / betas)[:, None] * scaled
