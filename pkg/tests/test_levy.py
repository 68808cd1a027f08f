import mpmath
import numpy as np
import pytest

from hmsopt import gamma_fn, levy_vector, mental_step, sigma_u, stream_from_seed
from hmsopt.levy import LevyParams, mental_steps, nfe_scale

mpmath.mp.dps = 40


def sigma_u_oracle(beta):
    """High-precision evaluation of the closed form, independent of the
    float implementation under test."""
    b = mpmath.mpf(repr(beta))
    num = mpmath.gamma(1 + b) * mpmath.sin(mpmath.pi * b / 2)
    den = mpmath.gamma((1 + b) / 2) * b * mpmath.mpf(2) ** ((b - 1) / 2)
    return float((num / den) ** (1 / b))


class TestGamma:
    def test_gamma_one(self):
        assert gamma_fn(1.0) == 1.0

    def test_gamma_five_is_factorial(self):
        assert gamma_fn(5.0) == pytest.approx(24.0, rel=1e-13)

    def test_gamma_half_is_sqrt_pi(self):
        assert gamma_fn(0.5) == pytest.approx(1.7724538509055160273, rel=1e-12)

    @pytest.mark.parametrize("z", [0.5, 1.0, 2.5, 5.0, 10.0, 0.1, 3.7, 17.25])
    def test_relative_error_vs_high_precision(self, z):
        exact = float(mpmath.gamma(mpmath.mpf(repr(z))))
        assert gamma_fn(z) == pytest.approx(exact, rel=1e-12)

    @pytest.mark.parametrize("z", [0.0, -1.0, -0.5])
    def test_domain_error(self, z):
        with pytest.raises(ValueError):
            gamma_fn(z)


class TestSigmaU:
    def test_beta_one_exact(self):
        assert sigma_u(1.0) == 1.0

    def test_beta_three_halves(self):
        assert sigma_u(1.5) == pytest.approx(0.696575, abs=1e-5)

    def test_beta_half(self):
        assert sigma_u(0.5) == pytest.approx(1.47934, abs=1e-4)

    @pytest.mark.parametrize("beta", [0.0, 2.0, -0.3, 2.5])
    def test_domain_error(self, beta):
        with pytest.raises(ValueError):
            sigma_u(beta)

    def test_positive_and_matches_oracle_on_grid(self):
        for beta in np.linspace(0.05, 1.95, 39):
            value = sigma_u(float(beta))
            assert value > 0.0
            assert value == pytest.approx(sigma_u_oracle(float(beta)), rel=1e-10)

    def test_from_beta_params(self):
        params = LevyParams.from_beta(1.5)
        assert params.sigma_v == 1.0
        assert params.sigma_u == pytest.approx(sigma_u_oracle(1.5), rel=1e-10)

    def test_params_reject_inconsistent_sigma_u(self):
        with pytest.raises(ValueError):
            LevyParams(beta=1.5, sigma_u=0.7)
        with pytest.raises(ValueError):
            LevyParams(beta=1.5, sigma_v=2.0)


class TestLevyVector:
    def test_deterministic(self):
        a = levy_vector(stream_from_seed(5), 1.5, 3)
        b = levy_vector(stream_from_seed(5), 1.5, 3)
        assert np.array_equal(a, b)
        assert a.shape == (3,)

    def test_matches_twin_stream_reconstruction(self):
        # documented draw order: u vector first, then v vector
        rng = stream_from_seed(11)
        twin = stream_from_seed(11)
        out = levy_vector(rng, 1.3, 50)
        u = sigma_u(1.3) * twin.standard_normal(50)
        v = twin.standard_normal(50)
        expected = 0.01 * u / np.abs(v) ** (1.0 / 1.3)
        assert np.array_equal(out, expected)

    def test_cauchy_median_at_beta_one(self):
        # u/|v| with sigma_u(1)=1 is standard Cauchy; median |.| is 1,
        # scaled by 0.01.
        draws = levy_vector(stream_from_seed(7), 1.0, 100_000)
        med = float(np.median(np.abs(draws)))
        assert med == pytest.approx(0.01, rel=0.10)

    def test_u_variance_matches_sigma_u(self):
        rng = stream_from_seed(13)
        twin = stream_from_seed(13)
        beta = 1.5
        levy_vector(rng, beta, 100_000)
        u = sigma_u(beta) * twin.standard_normal(100_000)
        assert float(np.var(u)) == pytest.approx(sigma_u(beta) ** 2, rel=0.05)

    def test_bad_dim(self):
        with pytest.raises(ValueError):
            levy_vector(stream_from_seed(0), 1.5, 0)


class TestMentalStep:
    def test_zero_at_best(self):
        x = np.array([1.0, 2.0, 3.0])
        out = mental_step(x, x, 10, 100, stream_from_seed(3), (0.3, 1.99))
        assert np.array_equal(out, np.zeros(3))

    def test_zero_at_budget_end(self):
        x = np.array([1.0, 2.0])
        best = np.array([0.0, 0.0])
        out = mental_step(x, best, 100, 100, stream_from_seed(3), (0.3, 1.99))
        assert np.array_equal(out, np.zeros(2))

    def test_half_budget_scale_is_one(self):
        x = np.array([3.0, -1.0])
        best = np.array([1.0, 1.0])
        rng = stream_from_seed(9)
        twin = stream_from_seed(9)
        out = mental_step(x, best, 50, 100, rng, (0.3, 1.99))
        beta = float(twin.uniform(0.3, 1.99))
        expected = 1.0 * levy_vector(twin, beta, 2) * (x - best)
        assert np.array_equal(out, expected)

    @pytest.mark.parametrize("frac,scale", [(0.0, 2.0), (0.25, 1.5), (0.5, 1.0), (0.75, 0.5), (1.0, 0.0)])
    def test_scale_factor_schedule(self, frac, scale):
        assert nfe_scale(int(frac * 1000), 1000) == pytest.approx(scale)

    def test_linear_in_displacement(self):
        x = np.array([2.0, 5.0])
        best = np.array([1.0, 1.0])
        a = mental_step(x, best, 0, 10, stream_from_seed(21), (0.5, 1.5))
        b = mental_step(best + 2 * (x - best), best, 0, 10, stream_from_seed(21), (0.5, 1.5))
        assert np.allclose(b, 2 * a, rtol=1e-12)

    def test_nfe_beyond_budget_rejected(self):
        with pytest.raises(ValueError):
            mental_step(np.zeros(2), np.ones(2), 101, 100, stream_from_seed(0), (0.3, 1.99))


class TestMentalSteps:
    def test_shape_and_determinism(self):
        x = np.array([1.0, -2.0, 0.5])
        best = np.zeros(3)
        a = mental_steps(x, best, 10, 100, stream_from_seed(2), (0.3, 1.99), 4)
        b = mental_steps(x, best, 10, 100, stream_from_seed(2), (0.3, 1.99), 4)
        assert a.shape == (4, 3)
        assert np.array_equal(a, b)

    def test_matches_twin_stream_reconstruction(self):
        x = np.array([1.0, -2.0])
        best = np.array([0.5, 0.5])
        rng = stream_from_seed(17)
        twin = stream_from_seed(17)
        out = mental_steps(x, best, 25, 100, rng, (0.4, 1.8), 3)
        betas = twin.uniform(0.4, 1.8, size=3)
        sus = np.array([sigma_u(b) for b in betas])
        u = twin.standard_normal((3, 2))
        v = twin.standard_normal((3, 2))
        displacement = (0.01 * nfe_scale(25, 100)) * (x - best)
        expected = (sus[:, None] * u) / np.abs(v) ** (1.0 / betas)[:, None] * displacement[None, :]
        assert np.array_equal(out, expected)

    def test_zero_rows_at_best(self):
        x = np.array([1.0, 1.0])
        out = mental_steps(x, x, 0, 10, stream_from_seed(3), (0.3, 1.99), 5)
        assert np.array_equal(out, np.zeros((5, 2)))
