import math

import numpy as np
import pytest

from mfrisk.errors import (
    DomainError,
    GridError,
    NonConvergence,
    NumericalInstability,
    RangeError,
)
from mfrisk.numerics import (
    Grid,
    GridFunction,
    caputo_l1,
    convolve,
    fixed_point,
    laplace_invert,
    nfold_convolve,
    stehfest_weights,
)

from .oracles import bisect_root, caputo_power


class TestGrid:
    def test_regular(self):
        g = Grid.regular(1.0, 0.25)
        np.testing.assert_allclose(g.points, [0.0, 0.25, 0.5, 0.75, 1.0])
        assert g.h == 0.25
        assert g.n == 5

    def test_rejects_nonzero_start(self):
        with pytest.raises(GridError):
            Grid(np.array([0.5, 1.0, 1.5]))

    def test_rejects_nonuniform(self):
        with pytest.raises(GridError):
            Grid(np.array([0.0, 0.1, 0.3]))

    def test_rejects_decreasing(self):
        with pytest.raises(GridError):
            Grid(np.array([0.0, 0.2, 0.1]))

    def test_gridfunction_length_mismatch(self):
        g = Grid.regular(1.0, 0.5)
        with pytest.raises(GridError):
            GridFunction(g, np.zeros(7))


class TestCaputoL1:
    def test_linear_function(self):
        g = Grid.regular(1.0, 1e-3)
        f = GridFunction(g, g.points.copy())
        d = caputo_l1(f, 0.5)
        want = caputo_power(g.points[1:], 1.0, 0.5)
        assert np.max(np.abs(d.values[1:] - want)) <= 5e-3

    def test_constant_is_zero(self):
        g = Grid.regular(2.0, 0.01)
        d = caputo_l1(GridFunction(g, np.full(g.n, 3.7)), 0.3)
        assert np.all(d.values == 0.0)

    def test_quadratic_alpha_03(self):
        g = Grid.regular(1.0, 1e-3)
        f = GridFunction(g, g.points**2)
        d = caputo_l1(f, 0.3)
        want = caputo_power(g.points[1:], 2.0, 0.3)
        assert np.max(np.abs(d.values[1:] - want)) <= 5e-3

    def test_linearity(self):
        g = Grid.regular(1.0, 0.01)
        f1 = GridFunction(g, np.sin(g.points))
        f2 = GridFunction(g, g.points**1.5)
        lhs = caputo_l1(GridFunction(g, 2.0 * f1.values + 3.0 * f2.values), 0.6)
        rhs = 2.0 * caputo_l1(f1, 0.6).values + 3.0 * caputo_l1(f2, 0.6).values
        np.testing.assert_allclose(lhs.values, rhs, atol=1e-12)

    def test_alpha_one_is_derivative(self):
        g = Grid.regular(1.0, 1e-3)
        d = caputo_l1(GridFunction(g, g.points**2), 1.0)
        np.testing.assert_allclose(d.values[1:], 2.0 * g.points[1:], atol=1e-5)

    def test_rejects_bad_alpha(self):
        g = Grid.regular(1.0, 0.1)
        f = GridFunction(g, g.points)
        for a in [0.0, -0.5, 1.5]:
            with pytest.raises(DomainError):
                caputo_l1(f, a)


class TestLaplaceInvert:
    # Gaver-Stehfest truncation error at order 14 is ~1e-6 and the method
    # bottoms out near 5e-8 (order 16) when the transform is evaluated in
    # double precision; tolerances below reflect the measured floor.
    def test_exponential(self):
        assert laplace_invert(lambda s: 1.0 / (s + 1.0), 1.0) == pytest.approx(
            math.exp(-1.0), abs=2e-6)
        assert laplace_invert(lambda s: 1.0 / (s + 1.0), 1.0, order=16) == \
            pytest.approx(math.exp(-1.0), abs=1e-7)

    def test_ramp(self):
        assert laplace_invert(lambda s: 1.0 / s**2, 2.5) == pytest.approx(
            2.5, abs=2e-6)

    def test_constant_one(self):
        for t in [0.1, 1.0, 7.0, 50.0]:
            assert laplace_invert(lambda s: 1.0 / s, t) == pytest.approx(
                1.0, abs=1e-8)

    def test_weights_sum(self):
        # sum of Stehfest weights vanishes for every even order
        for order in range(8, 19, 2):
            assert math.fsum(stehfest_weights(order)) == pytest.approx(
                0.0, abs=1e-4)

    def test_instability_detection(self):
        # a transform of nothing reasonable: noisy values trip the check
        rng = np.random.default_rng(0)

        def noisy(s):
            return 1.0 / s + 0.1 * rng.standard_normal()

        with pytest.raises(NumericalInstability):
            laplace_invert(noisy, 1.0, order=14, check_tol=1e-6)

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            laplace_invert(lambda s: 1.0 / s, -1.0)
        with pytest.raises(DomainError):
            laplace_invert(lambda s: 1.0 / s, 1.0, order=13)


class TestConvolve:
    def test_exponential_pair(self):
        g = Grid.regular(5.0, 1e-3)
        f = GridFunction(g, np.exp(-g.points))
        c = convolve(f, f)
        want = g.points * np.exp(-g.points)  # Gamma(2,1) density
        assert np.max(np.abs(c.values - want)) <= 1e-4

    def test_ones_give_t(self):
        g = Grid.regular(2.0, 1e-2)
        one = GridFunction(g, np.ones(g.n))
        c = convolve(one, one)
        np.testing.assert_allclose(c.values, g.points, atol=1e-12)

    def test_commutative(self):
        g = Grid.regular(2.0, 1e-2)
        f = GridFunction(g, np.sin(g.points) + 1.5)
        h = GridFunction(g, np.exp(-0.3 * g.points))
        np.testing.assert_allclose(convolve(f, h).values,
                                   convolve(h, f).values, atol=1e-6)

    def test_associative(self):
        # trapezoid error is O(h^2) per convolution, so the 1e-6 agreement
        # needs the fine grid
        g = Grid.regular(2.0, 1e-3)
        f = GridFunction(g, np.cos(g.points))
        h = GridFunction(g, np.exp(-g.points))
        k = GridFunction(g, 1.0 + 0.5 * g.points)
        lhs = convolve(convolve(f, h), k).values
        rhs = convolve(f, convolve(h, k)).values
        np.testing.assert_allclose(lhs, rhs, atol=1e-6)

    def test_singular_endpoints_mild(self):
        # f = g = t^(-1/4) e^(-t)/Gamma(3/4): (f*g)(t) = sqrt(t) e^(-t)/Gamma(3/2),
        # the singularity strength the process pipelines actually produce
        g = Grid.regular(2.0, 1e-3)
        t = g.points
        vals = np.empty_like(t)
        vals[0] = np.inf
        vals[1:] = t[1:] ** -0.25 * np.exp(-t[1:]) / math.gamma(0.75)
        f = GridFunction(g, vals)
        c = convolve(f, f)
        want = np.sqrt(t) * np.exp(-t) / math.gamma(1.5)
        assert np.max(np.abs(c.values - want)) <= 1e-3

    def test_singular_endpoints_arcsine(self):
        # the worst integrable case t^(-1/2) on both ends: accuracy degrades
        # to O(h^(1/2)) near the origin and recovers away from it
        g = Grid.regular(2.0, 1e-3)
        t = g.points
        vals = np.empty_like(t)
        vals[0] = np.inf
        vals[1:] = t[1:] ** -0.5 * np.exp(-t[1:]) / math.gamma(0.5)
        f = GridFunction(g, vals)
        c = convolve(f, f)
        want = np.exp(-t)
        quarter = t >= 0.25
        assert np.max(np.abs(c.values[quarter] - want[quarter])) <= 2e-3

    def test_grid_mismatch(self):
        f = GridFunction(Grid.regular(1.0, 0.1), np.ones(11))
        h = GridFunction(Grid.regular(1.0, 0.05), np.ones(21))
        with pytest.raises(GridError):
            convolve(f, h)

    def test_nfold(self):
        g = Grid.regular(6.0, 2e-3)
        f = GridFunction(g, np.exp(-g.points))
        c3 = nfold_convolve(f, 3)
        want = 0.5 * g.points**2 * np.exp(-g.points)  # Gamma(3,1)
        assert np.max(np.abs(c3.values - want)) <= 5e-4
        with pytest.raises(DomainError):
            nfold_convolve(f, 0)


class TestFixedPoint:
    def test_constant_map(self):
        assert fixed_point(lambda y: 0.5, init=0.9, damping=1.0) == \
            pytest.approx(0.5, abs=1e-12)

    def test_identity_returns_init(self):
        assert fixed_point(lambda y: y, init=0.37) == 0.37

    def test_paper_root_vs_bisection(self):
        # y = lam / (c1 (s + c mu (1-y))^a1 + c2 (...)^a2 + lam) at
        # lam=c=mu=1, c1=c2=0.5, a1=0.9, a2=0.5, s=1
        def mapping(y):
            arg = 2.0 - y
            return 1.0 / (0.5 * arg**0.9 + 0.5 * arg**0.5 + 1.0)

        root = fixed_point(mapping, init=0.5, tol=1e-13)
        oracle = bisect_root(lambda y: y - mapping(y), 1e-12, 1.0 - 1e-12)
        assert root == pytest.approx(oracle, abs=1e-10)
        assert root == pytest.approx(0.4195609813131994, abs=1e-9)
        assert 0.0 < root < 1.0

    def test_range_error(self):
        with pytest.raises(RangeError):
            fixed_point(lambda y: 5.0, init=0.5, damping=1.0)

    def test_non_convergence(self):
        with pytest.raises(NonConvergence):
            fixed_point(lambda y: 1.0 - y, init=0.2, damping=1.0,
                        max_iter=500)

    def test_bad_damping(self):
        with pytest.raises(DomainError):
            fixed_point(lambda y: y, init=0.5, damping=0.0)
