import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from mfrisk.errors import DomainError, ExtendNeeded
from mfrisk.numerics import Grid
from mfrisk.subordinators import (
    InversePath,
    MixedParams,
    SubordinatorPath,
    cov_correction_k,
    cov_inverse_corrected,
    cov_inverse_fixed_s,
    inverse_path,
    mean_inverse,
    mean_inverse_asymptotic,
    mixed_increments,
    sample_mixed_path,
    sample_stable_increment,
    stable_increments,
    var_inverse_asymptotic,
)

from .oracles import ml2_oracle, ml3_oracle, stable_median_oracle


class TestMixedParams:
    def test_weights_must_sum_to_one(self):
        with pytest.raises(DomainError):
            MixedParams(0.9, 0.5, 0.6, 0.6, 1.0)

    def test_exponent_ordering(self):
        with pytest.raises(DomainError):
            MixedParams(0.5, 0.9, 0.5, 0.5, 1.0)

    def test_lambda_positive(self):
        with pytest.raises(DomainError):
            MixedParams(0.9, 0.5, 0.5, 0.5, 0.0)

    def test_degenerate_allows_single_exponent(self):
        MixedParams(0.9, 0.5, 1.0, 0.0, 1.0)
        MixedParams(0.9, 0.5, 0.0, 1.0, 2.0)

    def test_phi(self):
        p = MixedParams(0.9, 0.5, 0.5, 0.5, 1.0)
        assert p.phi(1.0) == pytest.approx(1.0)
        assert p.phi(4.0) == pytest.approx(0.5 * 4**0.9 + 0.5 * 2.0)


class TestStableSampler:
    def test_positive_support(self, rng):
        x = stable_increments(0.6, 1.0, rng, 10000)
        assert (x > 0).all()

    def test_laplace_transform(self, rng):
        # E exp(-2 X) = exp(-sqrt(2)) for alpha=1/2, dt=1
        x = stable_increments(0.5, 1.0, rng, 100_000)
        vals = np.exp(-2.0 * x)
        z = (vals.mean() - math.exp(-math.sqrt(2.0))) \
            / (vals.std(ddof=1) / math.sqrt(x.size))
        assert abs(z) <= 3.0

    def test_dt_scaling(self, rng):
        # E exp(-s X_dt) = exp(-dt s^alpha)
        x = stable_increments(0.7, 0.25, rng, 100_000)
        vals = np.exp(-x)
        z = (vals.mean() - math.exp(-0.25)) \
            / (vals.std(ddof=1) / math.sqrt(x.size))
        assert abs(z) <= 3.0

    def test_median_near_one_for_alpha_near_one(self, rng):
        x = stable_increments(0.99, 1.0, rng, 50_000)
        med = float(np.median(x))
        oracle = stable_median_oracle(0.99)
        assert med == pytest.approx(oracle, rel=0.05)
        assert abs(med - 1.0) < 0.15

    def test_scalar_wrapper(self, rng):
        v = sample_stable_increment(0.5, 1.0, rng)
        assert v > 0

    def test_domain_errors(self, rng):
        with pytest.raises(DomainError):
            stable_increments(1.0, 1.0, rng, 3)
        with pytest.raises(DomainError):
            stable_increments(0.5, 0.0, rng, 3)


class TestMixedPath:
    def test_monotone_from_zero(self, ref_params, rng):
        grid = Grid.regular(1.0, 1e-3)
        d = sample_mixed_path(ref_params, grid, rng)
        assert d.values[0] == 0.0
        assert (np.diff(d.values) >= 0).all()

    def test_transform_at_one(self, ref_params, rng):
        # E exp(-s D(1)) = exp(-(c1 s^a1 + c2 s^a2))
        d1 = mixed_increments(ref_params, 1.0, rng, 100_000)
        for s in [0.5, 1.0, 2.0]:
            vals = np.exp(-s * d1)
            z = (vals.mean() - math.exp(-ref_params.phi(s))) \
                / (vals.std(ddof=1) / math.sqrt(d1.size))
            assert abs(z) <= 3.0, s

    def test_degenerate_matches_pure_stable(self, rng):
        p = MixedParams(0.7, 0.3, 1.0, 0.0, 1.0)
        mixed = mixed_increments(p, 1.0, rng, 50_000)
        pure = stable_increments(0.7, 1.0, rng, 50_000)
        assert stats.ks_2samp(mixed, pure).pvalue > 0.01


class TestInversePath:
    def test_linear_deterministic(self):
        s_grid = Grid.regular(3.0, 0.01)
        d = SubordinatorPath(s_grid, 2.0 * s_grid.points)
        t_grid = Grid.regular(2.0, 0.1)
        y = inverse_path(d, t_grid)
        np.testing.assert_allclose(y.values, t_grid.points / 2.0, atol=1e-12)

    def test_starts_at_zero(self, ref_params, rng):
        grid = Grid.regular(2.0, 1e-3)
        d = sample_mixed_path(ref_params, grid, rng)
        if d.values[-1] <= 1.0:
            pytest.skip("rare short path")
        y = inverse_path(d, Grid.regular(1.0, 0.25))
        assert y.values[0] == 0.0
        assert (np.diff(y.values) >= 0).all()

    def test_extend_needed(self, ref_params, rng):
        grid = Grid.regular(0.01, 1e-3)
        d = SubordinatorPath(grid, np.linspace(0.0, 0.5, grid.n))
        with pytest.raises(ExtendNeeded):
            inverse_path(d, Grid.regular(1.0, 0.1))

    def test_mc_mean_matches_formula(self, ref_params, rng):
        from mfrisk.ensembles import inverse_ensemble

        y = inverse_ensemble(ref_params, [1.0], 5000, 1e-3, master_seed=7)
        m = y[:, 0].mean()
        se = y[:, 0].std(ddof=1) / math.sqrt(y.shape[0])
        assert abs(m - mean_inverse(ref_params, 1.0)) <= 3.0 * se + 1e-3


class TestMeanInverse:
    def test_degenerate_closed_form(self):
        p = MixedParams(0.9, 0.5, 1.0, 0.0, 1.0)
        for t in [0.1, 1.0, 10.0]:
            assert mean_inverse(p, t) == pytest.approx(
                t**0.9 / math.gamma(1.9), rel=1e-12)

    def test_zero(self, ref_params):
        assert mean_inverse(ref_params, 0.0) == 0.0

    def test_frozen_oracle_value(self, ref_params):
        # 2 * E_{0.4,1.9}(-1), oracle at 60 digits
        assert mean_inverse(ref_params, 1.0) == pytest.approx(
            1.117120131074729581152, abs=1e-12)

    def test_negative_rejected(self, ref_params):
        with pytest.raises(DomainError):
            mean_inverse(ref_params, -1.0)

    def test_small_t_asymptote(self, ref_params):
        t = 1e-4
        ratio = mean_inverse(ref_params, t) / mean_inverse_asymptotic(
            ref_params, t, "small")
        assert abs(ratio - 1.0) <= 0.05

    def test_large_t_asymptote(self, ref_params):
        t = 1e4
        ratio = mean_inverse(ref_params, t) / mean_inverse_asymptotic(
            ref_params, t, "large")
        assert abs(ratio - 1.0) <= 0.05

    def test_degenerate_asymptote_errors(self):
        p = MixedParams(0.9, 0.5, 1.0, 0.0, 1.0)
        with pytest.raises(DomainError):
            mean_inverse_asymptotic(p, 1.0, "large")
        # small regime is exact for every t
        for t in [0.1, 5.0]:
            assert mean_inverse_asymptotic(p, t, "small") == pytest.approx(
                mean_inverse(p, t), rel=1e-12)

    def test_bad_regime(self, ref_params):
        with pytest.raises(DomainError):
            mean_inverse_asymptotic(ref_params, 1.0, "medium")


class TestVarianceAsymptote:
    @settings(max_examples=40, deadline=None)
    @given(a2=st.floats(min_value=0.05, max_value=0.95))
    def test_positive(self, a2):
        p = MixedParams(0.97, a2, 0.5, 0.5, 1.0)
        assert var_inverse_asymptotic(p, 3.0) > 0.0

    def test_scaling(self, ref_params):
        v1 = var_inverse_asymptotic(ref_params, 2.0)
        v2 = var_inverse_asymptotic(ref_params, 4.0)
        assert v2 / v1 == pytest.approx(2.0 ** (2 * ref_params.alpha2),
                                        rel=1e-12)

    def test_degenerate_rejected(self):
        with pytest.raises(DomainError):
            var_inverse_asymptotic(MixedParams(0.9, 0.5, 1.0, 0.0, 1.0), 1.0)


class TestCovariance:
    def test_zero_at_origin(self, ref_params):
        assert cov_inverse_fixed_s(ref_params, 0.0) == 0.0

    def test_frozen_oracle_value(self, ref_params):
        # 4 * E^2_{0.4,2.8}(-1), oracle at 60 digits
        assert cov_inverse_fixed_s(ref_params, 1.0) == pytest.approx(
            0.8067247648500442004379, abs=1e-12)

    def test_k_positive_small_s(self, ref_params):
        for s in [0.1, 0.5, 1.0, 2.0]:
            assert cov_correction_k(ref_params, s) > 0.0

    def test_corrected_below_limit(self, ref_params):
        s = 1.0
        lim = cov_inverse_fixed_s(ref_params, s)
        assert cov_inverse_corrected(ref_params, s, 50.0) < lim

    def test_corrected_converges_to_limit(self, ref_params):
        # the correction decays like t^(a2-1) = t^(-1/2) here
        s = 1.0
        lim = cov_inverse_fixed_s(ref_params, s)
        gap = [abs(cov_inverse_corrected(ref_params, s, t) - lim)
               for t in [1e2, 1e4, 1e6]]
        assert gap[0] > gap[1] > gap[2]
        assert gap[2] < 1e-3

    def test_degenerate_rejected(self):
        p = MixedParams(0.9, 0.5, 1.0, 0.0, 1.0)
        with pytest.raises(DomainError):
            cov_inverse_fixed_s(MixedParams(0.9, 0.5, 0.0, 1.0, 1.0), 1.0)
        with pytest.raises(DomainError):
            cov_inverse_corrected(p, 1.0, 10.0)


class TestFormulaVsOracle:
    def test_mean_inverse_general(self, alt_params):
        # U(t) = t^a1/c1 E_{a1-a2, a1+1}(-c2 t^(a1-a2)/c1) against the
        # mpmath series
        p = alt_params
        for t in [0.3, 1.0, 4.0]:
            z = -p.c2 / p.c1 * t ** (p.alpha1 - p.alpha2)
            want = t**p.alpha1 / p.c1 * ml2_oracle(
                p.alpha1 - p.alpha2, p.alpha1 + 1.0, z)
            assert mean_inverse(p, t) == pytest.approx(want, rel=1e-10)

    def test_cov_fixed_s_general(self, alt_params):
        p = alt_params
        s = 2.0
        z = -p.c2 / p.c1 * s ** (p.alpha1 - p.alpha2)
        want = s ** (2 * p.alpha1) / p.c1**2 * ml3_oracle(
            p.alpha1 - p.alpha2, 2 * p.alpha1 + 1.0, 2.0, z)
        assert cov_inverse_fixed_s(p, s) == pytest.approx(want, rel=1e-10)
