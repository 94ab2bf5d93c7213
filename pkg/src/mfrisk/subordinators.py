"""Mixed stable subordinators, their inverse (first-passage) processes, and
closed-form moments of the inverse process.

The mixed subordinator has Laplace transform E[exp(-s D(t))] =
exp(-t (c1 s^a1 + c2 s^a2)) and is sampled pathwise as
c1^{1/a1} D_{a1}(t) + c2^{1/a2} D_{a2}(t) from independent one-sided stable
increments.  The inverse process Y(t) = inf{s : D(s) > t} is built by a
monotone sweep over the operational grid; closed-form mean/variance/
covariance formulas come from the Mittag-Leffler module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ExtendNeeded, NonConvergence
from .mittag_leffler import MLParams, ml2, ml3
from .numerics import Grid

__all__ = [
    "MixedParams",
    "SubordinatorPath",
    "InversePath",
    "sample_stable_increment",
    "stable_increments",
    "sample_mixed_path",
    "mixed_increments",
    "inverse_path",
    "mean_inverse",
    "mean_inverse_asymptotic",
    "var_inverse_asymptotic",
    "cov_inverse_fixed_s",
    "cov_inverse_corrected",
]


@dataclass(frozen=True)
class MixedParams:
    """Parameters (alpha1, alpha2, c1, c2, lam) of the mixed processes.

    c1 + c2 must equal 1; when both weights are positive the stability
    exponents must satisfy 0 < alpha2 < alpha1 < 1.  A zero weight
    degenerates to the single stable subordinator with the other exponent.
    """

    alpha1: float
    alpha2: float
    c1: float
    c2: float
    lam: float

    def __post_init__(self) -> None:
        if self.c1 < 0 or self.c2 < 0 or abs(self.c1 + self.c2 - 1.0) > 1e-12:
            raise DomainError(f"weights must be >= 0 with c1 + c2 = 1, got "
                              f"({self.c1}, {self.c2})")
        if self.lam <= 0:
            raise DomainError(f"lambda must be > 0, got {self.lam}")
        if self.c1 > 0 and self.c2 > 0:
            if not (0.0 < self.alpha2 < self.alpha1 < 1.0):
                raise DomainError(
                    f"need 0 < alpha2 < alpha1 < 1, got "
                    f"({self.alpha1}, {self.alpha2})")
        elif self.c1 > 0:
            if not (0.0 < self.alpha1 < 1.0):
                raise DomainError(f"alpha1 must be in (0,1), got {self.alpha1}")
        else:
            if not (0.0 < self.alpha2 < 1.0):
                raise DomainError(f"alpha2 must be in (0,1), got {self.alpha2}")

    def phi(self, s):
        """Laplace exponent c1 s^a1 + c2 s^a2."""
        s = np.asarray(s, dtype=float)
        out = np.zeros_like(s)
        if self.c1 > 0:
            out = out + self.c1 * s ** self.alpha1
        if self.c2 > 0:
            out = out + self.c2 * s ** self.alpha2
        return out if out.ndim else float(out)


@dataclass
class SubordinatorPath:
    """Non-decreasing path D(s) on an operational-time grid, D(0) = 0."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != self.grid.points.shape:
            raise DomainError("values and grid lengths differ")
        if self.values[0] != 0.0 or (np.diff(self.values) < 0).any():
            raise DomainError("subordinator path must be non-decreasing from 0")


@dataclass
class InversePath:
    """Non-decreasing path Y(t) on a real-time grid, Y(0) = 0."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != self.grid.points.shape:
            raise DomainError("values and grid lengths differ")
        if self.values[0] != 0.0 or (np.diff(self.values) < 0).any():
            raise DomainError("inverse path must be non-decreasing from 0")


def stable_increments(alpha: float, dt: float, rng: np.random.Generator,
                      size) -> np.ndarray:
    """One-sided alpha-stable increments with E[exp(-sX)] = exp(-dt s^alpha).

    Kanter / Chambers-Mallows-Stuck construction with U uniform on (0, pi)
    and E unit exponential:

        X = sin(a U) / sin(U)^{1/a} * (sin((1-a) U) / E)^{(1-a)/a},

    scaled by dt^{1/a}.  (Note the exponent 1 on sin(aU): the variant with
    (sin(aU)/sin U)^{1/a} fails the defining Laplace-transform identity.)
    """
    if not (0.0 < alpha < 1.0):
        raise DomainError(f"stable exponent must be in (0,1), got {alpha}")
    if dt <= 0:
        raise DomainError(f"dt must be > 0, got {dt}")
    u = rng.uniform(0.0, math.pi, size)
    e = rng.standard_exponential(size)
    a = alpha
    x = np.sin(a * u) / np.sin(u) ** (1.0 / a) \
        * (np.sin((1.0 - a) * u) / e) ** ((1.0 - a) / a)
    return dt ** (1.0 / a) * x


def sample_stable_increment(alpha: float, dt: float,
                            rng: np.random.Generator) -> float:
    """Single one-sided stable variate with Laplace transform e^{-dt s^a}."""
    return float(stable_increments(alpha, dt, rng, None))


def mixed_increments(p: MixedParams, dt: float, rng: np.random.Generator,
                     size) -> np.ndarray:
    """Increments of the mixed subordinator over steps of length dt.

    Degenerate weights skip the vanished component entirely rather than
    evaluating 0^(1/alpha) scalings.
    """
    out = None
    if p.c1 > 0:
        out = p.c1 ** (1.0 / p.alpha1) * stable_increments(p.alpha1, dt, rng, size)
    if p.c2 > 0:
        part = p.c2 ** (1.0 / p.alpha2) * stable_increments(p.alpha2, dt, rng, size)
        out = part if out is None else out + part
    return out


def mixed_increments_var(p: MixedParams, dts: np.ndarray,
                         rng: np.random.Generator) -> np.ndarray:
    """Mixed-subordinator increments over elementwise step lengths ``dts``,
    using the stable scaling D_a(dt) =d dt^{1/a} D_a(1)."""
    dts = np.asarray(dts, dtype=float)
    out = None
    if p.c1 > 0:
        part = (p.c1 ** (1.0 / p.alpha1) * dts ** (1.0 / p.alpha1)
                * stable_increments(p.alpha1, 1.0, rng, dts.shape))
        out = part
    if p.c2 > 0:
        part = (p.c2 ** (1.0 / p.alpha2) * dts ** (1.0 / p.alpha2)
                * stable_increments(p.alpha2, 1.0, rng, dts.shape))
        out = part if out is None else out + part
    return out


def sample_mixed_path(p: MixedParams, grid: Grid,
                      rng: np.random.Generator) -> SubordinatorPath:
    """Sample D on the given operational-time grid from independent
    per-step stable increments."""
    inc = mixed_increments(p, grid.h, rng, grid.n - 1)
    values = np.concatenate(([0.0], np.cumsum(inc)))
    return SubordinatorPath(grid, values)


def inverse_path(d: SubordinatorPath, t_grid: Grid) -> InversePath:
    """First-passage path Y(t) = inf{s : D(s) > t} on the target grid.

    Grid convention: Y(t) is the last operational grid point before D
    exceeds t (the pre-jump time), so a deterministic strictly increasing D
    inverts exactly at grid points and Y underestimates the continuous-time
    infimum by at most one operational step.
    """
    if d.values[-1] <= t_grid.points[-1]:
        raise ExtendNeeded(
            f"subordinator path tops out at {d.values[-1]}, need "
            f"> {t_grid.points[-1]}; extend the operational grid")
    idx = np.searchsorted(d.values, t_grid.points, side="right")
    return InversePath(t_grid, d.grid.points[idx - 1])


def mean_inverse(p: MixedParams, t: float) -> float:
    """Mean U(t) of the inverse mixed stable subordinator:
    U(t) = (t^a1 / c1) E_{a1-a2, a1+1}(-c2 t^(a1-a2) / c1)."""
    if t < 0:
        raise DomainError(f"t must be >= 0, got {t}")
    if t == 0.0:
        return 0.0
    if p.c1 == 0.0:
        return t ** p.alpha2 / (p.c2 * math.gamma(p.alpha2 + 1.0))
    if p.c2 == 0.0:
        return t ** p.alpha1 / (p.c1 * math.gamma(p.alpha1 + 1.0))
    z = -p.c2 / p.c1 * t ** (p.alpha1 - p.alpha2)
    return t ** p.alpha1 / p.c1 * ml2(p.alpha1 - p.alpha2, p.alpha1 + 1.0, z)


def mean_inverse_asymptotic(p: MixedParams, t: float, regime: str) -> float:
    """Power-law limits of U(t): t^a1/(c1 Gamma(a1+1)) for t -> 0 and
    t^a2/(c2 Gamma(a2+1)) for t -> infinity."""
    if t <= 0:
        raise DomainError(f"t must be > 0, got {t}")
    if regime == "small":
        if p.c1 == 0.0:
            raise DomainError("small-t regime undefined for c1 = 0")
        return t ** p.alpha1 / (p.c1 * math.gamma(p.alpha1 + 1.0))
    if regime == "large":
        if p.c2 == 0.0:
            raise DomainError("large-t regime undefined for c2 = 0")
        return t ** p.alpha2 / (p.c2 * math.gamma(p.alpha2 + 1.0))
    raise DomainError(f"regime must be 'small' or 'large', got {regime!r}")


def var_inverse_asymptotic(p: MixedParams, t: float) -> float:
    """Large-t variance of Y(t):
    (t^(2 a2) / c2^2) (2/Gamma(2 a2 + 1) - 1/Gamma(a2 + 1)^2)."""
    if p.c2 == 0.0:
        raise DomainError("variance asymptote undefined for c2 = 0")
    if t < 0:
        raise DomainError(f"t must be >= 0, got {t}")
    a2 = p.alpha2
    bracket = 2.0 / math.gamma(2.0 * a2 + 1.0) - 1.0 / math.gamma(a2 + 1.0) ** 2
    return t ** (2.0 * a2) / p.c2 ** 2 * bracket


def cov_inverse_fixed_s(p: MixedParams, s: float) -> float:
    """Large-t limit of Cov(Y(s), Y(t)) at fixed s:
    (s^(2 a1) / c1^2) E^2_{a1-a2, 2 a1 + 1}(-c2 s^(a1-a2) / c1)."""
    if p.c1 == 0.0:
        raise DomainError("covariance limit undefined for c1 = 0")
    if s < 0:
        raise DomainError(f"s must be >= 0, got {s}")
    if s == 0.0:
        return 0.0
    z = -p.c2 / p.c1 * s ** (p.alpha1 - p.alpha2)
    ml = ml3(MLParams(p.alpha1 - p.alpha2, 2.0 * p.alpha1 + 1.0, 2.0), z)
    return s ** (2.0 * p.alpha1) / p.c1 ** 2 * ml


def cov_correction_k(p: MixedParams, s: float, kmax: int = 400) -> float:
    """Coefficient K(s) of the t^(a2-1) covariance correction:

        K(s) = s^(a1+1) / (c1 c2 Gamma(a2))
               * sum_k (k(a1-a2)+a1) x^k / Gamma(k(a1-a2)+a1+2),

    with x = -c2 s^(a1-a2)/c1.
    """
    if p.c1 == 0.0 or p.c2 == 0.0:
        raise DomainError("K(s) requires both weights positive")
    if s < 0:
        raise DomainError(f"s must be >= 0, got {s}")
    if s == 0.0:
        return 0.0
    da = p.alpha1 - p.alpha2
    x = -p.c2 / p.c1 * s ** da
    total = 0.0
    xk = 1.0
    run = 0
    for k in range(kmax):
        term = (k * da + p.alpha1) * xk / math.gamma(k * da + p.alpha1 + 2.0)
        total += term
        xk *= x
        if abs(term) < 1e-16 * (1.0 + abs(total)):
            run += 1
            if run >= 2:
                break
        else:
            run = 0
    else:
        raise NonConvergence(f"K(s) series did not converge in {kmax} terms at s={s}")
    return s ** (p.alpha1 + 1.0) / (p.c1 * p.c2 * math.gamma(p.alpha2)) * total


def cov_inverse_corrected(p: MixedParams, s: float, t: float) -> float:
    """Finite-t refinement of the covariance limit for t >> s:
    cov_inverse_fixed_s(s) - t^(a2-1) K(s)."""
    if p.c1 == 0.0 or p.c2 == 0.0:
        raise DomainError("corrected covariance requires both weights positive")
    if t <= 0:
        raise DomainError(f"t must be > 0, got {t}")
    return cov_inverse_fixed_s(p, s) - t ** (p.alpha2 - 1.0) * cov_correction_k(p, s)
