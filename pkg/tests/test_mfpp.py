import math

import numpy as np
import pytest
from scipy import stats
from scipy.integrate import quad

from mfrisk.ensembles import inverse_ensemble
from mfrisk.errors import DomainError, GridError
from mfrisk.mfpp import (
    CountingPath,
    gov_residual,
    interarrival_density,
    interarrival_lt,
    mfpp_cov,
    mfpp_mean,
    mfpp_var,
    pgf,
    simulate_mfpp,
    state_prob_p0,
    state_prob_pn,
    state_prob_pn_grid,
)
from mfrisk.mittag_leffler import ml2
from mfrisk.numerics import Grid, laplace_invert
from mfrisk.subordinators import InversePath, MixedParams, mean_inverse, mixed_increments_var


class TestSimulate:
    def test_zero_clock_gives_zero_counts(self, ref_params, rng):
        grid = Grid.regular(1.0, 0.1)
        y = InversePath(grid, np.zeros(grid.n))
        path = simulate_mfpp(ref_params, y, rng)
        assert (path.counts == 0).all()

    def test_counts_monotone_integer(self, ref_params, rng):
        y = InversePath(Grid.regular(1.0, 0.01),
                        np.linspace(0.0, 3.0, 101))
        path = simulate_mfpp(ref_params, y, rng)
        assert path.counts[0] == 0
        assert (np.diff(path.counts) >= 0).all()

    def test_counting_path_validation(self):
        g = Grid.regular(1.0, 0.5)
        with pytest.raises(DomainError):
            CountingPath(g, np.array([0, 2, 1]))
        with pytest.raises(DomainError):
            CountingPath(g, np.array([0.0, 1.0, 2.0]))

    def test_mean_and_variance(self, ref_params, rng):
        # E N(1) = lam U(1); Var N(1) = lam U + lam^2 Var Y
        n_paths = 10_000
        p = MixedParams(0.9, 0.5, 0.5, 0.5, 2.0)
        y = inverse_ensemble(p, [1.0], n_paths, 1e-3, master_seed=13)[:, 0]
        counts = rng.poisson(p.lam * y)
        m, v = counts.mean(), counts.var(ddof=1)
        se_m = counts.std(ddof=1) / math.sqrt(n_paths)
        assert abs(m - p.lam * mean_inverse(p, 1.0)) <= 3 * se_m + 1e-2
        want_v = p.lam * mean_inverse(p, 1.0) + p.lam**2 * y.var(ddof=1)
        se_v = np.sqrt(np.var((counts - m) ** 2, ddof=1) / n_paths)
        assert abs(v - want_v) <= 3 * se_v


class TestInterarrival:
    def test_lt_at_one(self, ref_params):
        assert interarrival_lt(ref_params, 1.0) == pytest.approx(0.5, abs=1e-15)

    def test_lt_limits_and_monotone(self, ref_params):
        values = [interarrival_lt(ref_params, s)
                  for s in [1e-8, 1e-4, 0.1, 1.0, 10.0]]
        assert values[0] == pytest.approx(1.0, abs=1e-3)
        assert all(a > b for a, b in zip(values, values[1:]))
        with pytest.raises(DomainError):
            interarrival_lt(ref_params, 0.0)

    def test_density_normalizes(self, ref_params):
        p = ref_params
        horizon = 50.0
        mass, _ = quad(lambda t: interarrival_density(p, t), 1e-12, horizon,
                       limit=400)
        # survival tail from the small-s transform: S(t) ~ c2 t^-a2/(lam G(1-a2))
        tail = p.c2 * horizon ** -p.alpha2 / (p.lam * math.gamma(1 - p.alpha2))
        assert mass + tail == pytest.approx(1.0, abs=1e-3)

    def test_density_matches_inversion(self, ref_params):
        sup = max(
            abs(interarrival_density(ref_params, float(t))
                - laplace_invert(lambda s: interarrival_lt(ref_params, s),
                                 float(t)))
            for t in np.linspace(0.1, 5.0, 30))
        assert sup <= 1e-3

    def test_degenerate_reduces_to_ml_density(self):
        p = MixedParams(0.8, 0.5, 1.0, 0.0, 1.3)
        for t in [0.2, 1.0, 3.0]:
            want = 1.3 * t ** (0.8 - 1.0) * ml2(0.8, 0.8, -1.3 * t**0.8)
            assert interarrival_density(p, t) == pytest.approx(want, rel=1e-10)

    def test_first_jump_ks(self, ref_params, rng):
        # renewal consistency: exact first-claim times vs the density CDF
        n = 10_000
        gaps = rng.exponential(1.0 / ref_params.lam, n)
        t1 = mixed_increments_var(ref_params, gaps, rng)
        ts = np.linspace(0.05, 8.0, 60)
        dens = [interarrival_density(ref_params, float(t)) for t in ts]
        cdf_grid = np.concatenate(
            ([0.0], np.cumsum(0.5 * (np.array(dens[1:]) + np.array(dens[:-1]))
                              * np.diff(ts))))
        head, _ = quad(lambda t: interarrival_density(ref_params, t),
                       1e-12, ts[0])
        cdf_grid = head + cdf_grid
        emp = np.searchsorted(np.sort(t1), ts, side="right") / n
        ks = np.max(np.abs(emp - cdf_grid))
        assert ks <= 0.02


class TestStateProbs:
    def test_p0_at_zero(self, ref_params):
        assert state_prob_p0(ref_params, 0.0) == 1.0

    def test_p0_degenerate(self):
        p = MixedParams(0.8, 0.5, 1.0, 0.0, 1.0)
        for t in [0.5, 2.0]:
            assert state_prob_p0(p, t) == pytest.approx(
                ml2(0.8, 1.0, -t**0.8), rel=1e-10)

    def test_p0_vs_mc(self, ref_params, rng):
        n_paths = 10_000
        y = inverse_ensemble(ref_params, [1.0], n_paths, 1e-3,
                             master_seed=29)[:, 0]
        counts = rng.poisson(ref_params.lam * y)
        frac = (counts == 0).mean()
        se = math.sqrt(frac * (1 - frac) / n_paths)
        assert abs(frac - state_prob_p0(ref_params, 1.0)) <= 3 * se + 1e-3

    def test_methods_agree(self, ref_params):
        grid = Grid.regular(1.0, 1e-3)
        for n in range(6):
            a = state_prob_pn(ref_params, n, 1.0, method="laplace")
            b = state_prob_pn(ref_params, n, 1.0, method="convolution",
                              grid=grid)
            assert abs(a - b) <= 5e-3
        # strict mode passes at the same point
        state_prob_pn(ref_params, 2, 1.0, method="laplace", grid=grid,
                      strict=True)

    def test_consistency_with_p0(self, ref_params):
        grid = Grid.regular(1.0, 1e-3)
        for method in ["laplace", "convolution"]:
            v = state_prob_pn(ref_params, 0, 1.0, method=method, grid=grid)
            assert abs(v - state_prob_p0(ref_params, 1.0)) <= 1e-3

    def test_normalization(self, ref_params):
        total = sum(state_prob_pn(ref_params, n, 1.0) for n in range(25))
        assert total == pytest.approx(1.0, abs=1e-4)

    def test_at_time_zero(self, ref_params):
        assert state_prob_pn(ref_params, 0, 0.0) == 1.0
        assert state_prob_pn(ref_params, 3, 0.0) == 0.0

    def test_grid_required_for_convolution(self, ref_params):
        with pytest.raises(GridError):
            state_prob_pn(ref_params, 1, 1.0, method="convolution")
        with pytest.raises(GridError):
            state_prob_pn(ref_params, 1, 0.77701,
                          method="convolution", grid=Grid.regular(1.0, 1e-3))

    def test_histogram_vs_mc(self, ref_params, rng):
        n_paths = 10_000
        y = inverse_ensemble(ref_params, [1.0], n_paths, 1e-3,
                             master_seed=31)[:, 0]
        counts = rng.poisson(ref_params.lam * y)
        for n in range(6):
            frac = (counts == n).mean()
            se = math.sqrt(max(frac * (1 - frac), 1e-6) / n_paths)
            pn = state_prob_pn(ref_params, n, 1.0)
            assert abs(frac - pn) <= 3 * se + 2e-3, n


class TestPgf:
    def test_boundary_values(self, ref_params):
        assert pgf(ref_params, 1.0, 1.7) == 1.0
        assert pgf(ref_params, 0.0, 1.7) == pytest.approx(
            state_prob_p0(ref_params, 1.7), rel=1e-12)

    def test_derivative_is_mean(self, ref_params):
        h = 1e-5
        d = (pgf(ref_params, 1.0, 1.0) - pgf(ref_params, 1.0 - h, 1.0)) / h
        assert d == pytest.approx(mfpp_mean(ref_params, 1.0), rel=1e-3)

    def test_monotone_convex(self, ref_params):
        zs = np.linspace(0.0, 1.0, 21)
        vals = np.array([pgf(ref_params, float(z), 1.0) for z in zs])
        assert (np.diff(vals) >= -1e-12).all()
        assert (np.diff(vals, 2) >= -1e-10).all()

    def test_domain(self, ref_params):
        with pytest.raises(DomainError):
            pgf(ref_params, 1.2, 1.0)


class TestMoments:
    def test_overdispersion(self, ref_params):
        var_y = 0.3
        t = 1.0
        assert mfpp_var(ref_params, t, var_y) - mfpp_mean(ref_params, t) == \
            pytest.approx(ref_params.lam**2 * var_y, rel=1e-12)

    def test_cov_at_equal_times(self, ref_params):
        assert mfpp_cov(ref_params, 1.0, 1.0, 0.3) == pytest.approx(
            mfpp_var(ref_params, 1.0, 0.3), rel=1e-12)

    def test_cov_requires_order(self, ref_params):
        with pytest.raises(DomainError):
            mfpp_cov(ref_params, 2.0, 1.0, 0.3)

    def test_mean_scales_with_lambda(self):
        p = MixedParams(0.9, 0.5, 0.5, 0.5, 2.0)
        assert mfpp_mean(p, 1.0) == pytest.approx(
            2.0 * 1.117120131074729581152, abs=1e-10)


class TestGoverningEquations:
    def test_residual_small(self, ref_params):
        grid = Grid.regular(2.0, 1e-3)
        window = grid.points >= 0.1
        for n in range(3):
            res = gov_residual(ref_params, n, grid)
            assert np.max(np.abs(res.values[window])) <= 5e-3, n

    def test_residual_degenerate(self):
        p = MixedParams(0.8, 0.5, 1.0, 0.0, 1.0)
        grid = Grid.regular(2.0, 1e-3)
        window = grid.points >= 0.1
        res = gov_residual(p, 0, grid)
        assert np.max(np.abs(res.values[window])) <= 5e-3
