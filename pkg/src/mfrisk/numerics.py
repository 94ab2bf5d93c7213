"""Shared numerical machinery: uniform grids, the L1 Caputo scheme,
Gaver-Stehfest Laplace inversion, singular-endpoint grid convolution, and a
damped fixed-point solver."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from math import lgamma
from typing import Callable

import numpy as np

from .errors import DomainError, GridError, NonConvergence, NumericalInstability, RangeError

__all__ = [
    "Grid",
    "GridFunction",
    "SamplePath",
    "caputo_l1",
    "laplace_invert",
    "stehfest_weights",
    "convolve",
    "nfold_convolve",
    "fixed_point",
]


@dataclass(frozen=True)
class Grid:
    """Uniform time grid starting at 0."""

    points: np.ndarray

    def __post_init__(self) -> None:
        pts = np.asarray(self.points, dtype=float)
        object.__setattr__(self, "points", pts)
        if pts.ndim != 1 or pts.size < 1:
            raise GridError("grid needs at least one point")
        if pts[0] != 0.0:
            raise GridError("grid must start at 0")
        if pts.size == 1:
            return  # degenerate single-point grid (e.g. a lone increment)
        d = np.diff(pts)
        if (d <= 0).any():
            raise GridError("grid points must be strictly increasing")
        h = d[0]
        if np.max(np.abs(d - h)) > 1e-12 * max(h, 1.0):
            raise GridError("grid spacing must be uniform to 1e-12")

    @property
    def h(self) -> float:
        if self.points.size < 2:
            raise GridError("spacing undefined on a single-point grid")
        return float(self.points[1] - self.points[0])

    @property
    def n(self) -> int:
        return int(self.points.size)

    @classmethod
    def regular(cls, horizon: float, h: float) -> "Grid":
        n = int(round(horizon / h))
        return cls(np.linspace(0.0, n * h, n + 1))


@dataclass
class GridFunction:
    """Real-valued samples on a uniform grid."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != self.grid.points.shape:
            raise GridError("values and grid lengths differ")


# a sampled path is structurally the same thing as a sampled function;
# the alias marks intent (right-continuous piecewise record of a process)
SamplePath = GridFunction


def _same_grid(f: GridFunction, g: GridFunction) -> Grid:
    if f.grid.n != g.grid.n or abs(f.grid.h - g.grid.h) > 1e-12 * f.grid.h:
        raise GridError("grid mismatch")
    return f.grid


def caputo_l1(f: GridFunction, alpha: float) -> GridFunction:
    """L1-scheme Caputo derivative of order alpha in (0, 1] on the grid.

    For alpha < 1 the scheme integrates the kernel (t-s)^(-alpha)/Gamma(1-alpha)
    against the derivative of the piecewise-linear interpolant:

        D^a f(t_n) ~ h^{-a}/Gamma(2-a) * sum_j b_j (f_{n-j} - f_{n-j-1}),
        b_j = (j+1)^{1-a} - j^{1-a}.

    For alpha = 1 it returns the second-order finite difference.  The value
    at t=0 is 0 by convention (f constant gives identically zero output).
    """
    if not (0.0 < alpha <= 1.0):
        raise DomainError(f"caputo_l1 requires alpha in (0,1], got {alpha}")
    v = f.values
    h = f.grid.h
    n = f.grid.n
    if alpha == 1.0:
        out = np.gradient(v, h, edge_order=2)
        out[0] = 0.0
        return GridFunction(f.grid, out)
    df = np.diff(v)
    j = np.arange(n - 1, dtype=float)
    b = (j + 1.0) ** (1.0 - alpha) - j ** (1.0 - alpha)
    conv = np.convolve(df, b)[: n - 1]
    c = h ** (-alpha) / math.gamma(2.0 - alpha)
    out = np.empty(n)
    out[0] = 0.0
    out[1:] = c * conv
    return GridFunction(f.grid, out)


@lru_cache(maxsize=None)
def stehfest_weights(order: int) -> tuple:
    """Stehfest weights V_k, k = 1..order, from the exact integer formula."""
    if order % 2 != 0 or not (2 <= order <= 30):
        raise DomainError(f"Stehfest order must be even in [2,30], got {order}")
    half = order // 2
    fact = math.factorial
    weights = []
    for k in range(1, order + 1):
        acc = 0.0
        for j in range((k + 1) // 2, min(k, half) + 1):
            num = j ** half * fact(2 * j)
            den = (
                fact(half - j) * fact(j) * fact(j - 1)
                * fact(k - j) * fact(2 * j - k)
            )
            acc += num / den
        weights.append((-1.0) ** (k + half) * acc)
    return tuple(weights)


def laplace_invert(
    F: Callable[[float], float],
    t: float,
    order: int = 14,
    check_tol: float | None = None,
) -> float:
    """Gaver-Stehfest inversion of a real-valued Laplace transform at t > 0.

    All-real but mildly ill-conditioned: with the transform evaluated in
    double precision, truncation gives ~1e-6 at order 14, the best floor is
    ~5e-8 near order 16, and rounding dominates beyond order 18.  When
    ``check_tol`` is given the value is cross-checked against order-2 and
    NumericalInstability is raised on disagreement.
    """
    if t <= 0:
        raise DomainError(f"laplace_invert requires t > 0, got {t}")
    if order not in range(8, 21) or order % 2:
        raise DomainError(f"order must be an even integer in [8,20], got {order}")
    ln2_t = math.log(2.0) / t
    w = stehfest_weights(order)
    val = ln2_t * math.fsum(w[k] * F((k + 1) * ln2_t) for k in range(order))
    if check_tol is not None:
        w2 = stehfest_weights(order - 2)
        val2 = ln2_t * math.fsum(w2[k] * F((k + 1) * ln2_t) for k in range(order - 2))
        if abs(val - val2) > check_tol * (1.0 + abs(val)):
            raise NumericalInstability(
                f"Gaver-Stehfest orders {order}/{order - 2} disagree: "
                f"{val} vs {val2}"
            )
    return val


def _power_fit(v1: float, v2: float, h: float) -> tuple[float, float]:
    """Fit a*s^p through (h, v1) and (2h, v2).

    Falls back to a flat panel (p=0) when the samples do not look like an
    integrable power law.
    """
    if v1 <= 0 or v2 <= 0 or not (math.isfinite(v1) and math.isfinite(v2)):
        return (v1 if math.isfinite(v1) else 0.0), 0.0
    p = math.log(v2 / v1) / math.log(2.0)
    if p <= -1.0 or p > 8.0:
        return v1, 0.0
    return v1 / h**p, p


def convolve(f: GridFunction, g: GridFunction) -> GridFunction:
    """Laplace convolution (f*g)(t_i) = int_0^{t_i} f(s) g(t_i - s) ds.

    Trapezoidal rule in the interior.  A non-finite sample at t=0 marks an
    integrable endpoint singularity (such as t^(a-1)); the affected endpoint
    panel is then replaced by the exact integral of a power law a*s^p fitted
    through the two samples nearest the endpoint.
    """
    grid = _same_grid(f, g)
    h = grid.h
    n = grid.n
    fv = f.values
    gv = g.values
    f_sing = not math.isfinite(fv[0])
    g_sing = not math.isfinite(gv[0])
    fv = np.where(np.isfinite(fv), fv, 0.0)
    gv = np.where(np.isfinite(gv), gv, 0.0)

    # trapezoid: h * (full convolution - half the two endpoint products)
    out = np.convolve(fv, gv)[:n] * h
    out -= 0.5 * h * (fv[0] * gv + gv[0] * fv)
    out[0] = 0.0

    if n > 2 and (f_sing or g_sing):
        fa, fp = _power_fit(fv[1], fv[2], h)
        ga, gp = _power_fit(gv[1], gv[2], h)
        idx = np.arange(2, n)
        if f_sing:
            # replace the [0, h] panel: int_0^h f(s) g(t_i - s) ds
            panel = fa * h ** (fp + 1.0) / (fp + 1.0)
            out[2:] += panel * 0.5 * (gv[idx] + gv[idx - 1]) \
                - 0.5 * h * (fv[0] * gv[idx] + fv[1] * gv[idx - 1])
        if g_sing:
            # replace the [t_i - h, t_i] panel via u = t_i - s
            panel = ga * h ** (gp + 1.0) / (gp + 1.0)
            out[2:] += panel * 0.5 * (fv[idx] + fv[idx - 1]) \
                - 0.5 * h * (gv[0] * fv[idx] + gv[1] * fv[idx - 1])
        # near the origin the locally-fitted power laws integrate exactly
        # through the Beta function; with both factors singular the panel
        # approximations above are weakest there, so the first few points
        # use the product model outright
        lbeta = lgamma(fp + 1.0) + lgamma(gp + 1.0) - lgamma(fp + gp + 2.0)
        head = 3 if (f_sing and g_sing) else 1
        for i in range(1, min(head, n - 1) + 1):
            ti = i * h
            out[i] = fa * ga * ti ** (fp + gp + 1.0) * math.exp(lbeta)
    return GridFunction(grid, out)


def nfold_convolve(f: GridFunction, n: int) -> GridFunction:
    """n-fold Laplace self-convolution f^{*n}; n=1 returns f unchanged."""
    if n < 1:
        raise DomainError(f"nfold_convolve requires n >= 1, got {n}")
    acc = f
    for _ in range(n - 1):
        acc = convolve(acc, f)
    return acc


def fixed_point(
    mapping: Callable[[float], float],
    init: float,
    tol: float = 1e-12,
    damping: float = 0.5,
    max_iter: int = 100_000,
) -> float:
    """Damped fixed-point iteration y <- (1-d) y + d map(y).

    Intended for probability-generating-type roots: iterates must stay in
    [0, 1 + 1e-9] (RangeError otherwise); NonConvergence after max_iter.
    """
    if not (0.0 < damping <= 1.0):
        raise DomainError(f"damping must be in (0,1], got {damping}")
    y = float(init)
    for _ in range(max_iter):
        fy = mapping(y)
        if abs(fy - y) <= tol:
            return y
        y = (1.0 - damping) * y + damping * fy
        if y < -1e-12 or y > 1.0 + 1e-9:
            raise RangeError(f"fixed_point iterate left [0, 1+1e-9]: {y}")
    raise NonConvergence(f"fixed_point: no convergence after {max_iter} iterations")
