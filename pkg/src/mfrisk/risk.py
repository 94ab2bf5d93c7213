"""Surplus processes driven by mixed fractional Poisson claims: the
Y-premium process, its deterministic-premium variant, and the constant-rate
MFRP-II, together with their moment identities, increment (noise) process,
and long/short-range dependence exponent estimation."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .compound import DiscreteClaimLaw
from .ensembles import BLOCK_SIZE, Estimate, _inverse_block, map_blocks
from .errors import ConfigMismatch, DomainError, FitError, GridError
from .mfpp import simulate_mfpp
from .numerics import Grid, SamplePath
from .subordinators import (
    InversePath,
    MixedParams,
    cov_correction_k,
    cov_inverse_fixed_s,
    mean_inverse,
    mean_inverse_asymptotic,
    var_inverse_asymptotic,
)

logger = logging.getLogger(__name__)

__all__ = [
    "Variant",
    "ClaimModel",
    "RiskConfig",
    "SurplusPath",
    "simulate_surplus",
    "surplus_ensemble",
    "martingale_check",
    "MartingaleReport",
    "mfrp_cov",
    "mfrp2_cov",
    "increments",
    "var_increment_asymptotic",
    "lrd_exponent",
    "mfrp_corr_curve",
    "mfpnrp_corr_curve",
]


class Variant(str, Enum):
    MFRP = "MFRP"
    MFRP_VARIANT = "MFRP_VARIANT"
    MFRP2 = "MFRP2"


@dataclass(frozen=True)
class ClaimModel:
    """Claim-size distribution with closed-form moments.

    Use the classmethod constructors; ``kind`` is one of exponential,
    pareto, discrete, degenerate.
    """

    kind: str
    rate: float = 0.0
    shape: float = 0.0
    scale: float = 0.0
    value: float = 0.0
    law: DiscreteClaimLaw | None = None

    @classmethod
    def exponential(cls, rate: float) -> "ClaimModel":
        if rate <= 0:
            raise DomainError(f"exponential rate must be > 0, got {rate}")
        return cls("exponential", rate=rate)

    @classmethod
    def pareto(cls, shape: float, scale: float) -> "ClaimModel":
        if scale <= 0:
            raise DomainError(f"pareto scale must be > 0, got {scale}")
        if shape <= 1:
            raise DomainError(
                f"pareto shape must be > 1 for a finite mean, got {shape}")
        return cls("pareto", shape=shape, scale=scale)

    @classmethod
    def discrete(cls, law: DiscreteClaimLaw) -> "ClaimModel":
        return cls("discrete", law=law)

    @classmethod
    def degenerate(cls, value: float) -> "ClaimModel":
        if value <= 0:
            raise DomainError(f"degenerate claim must be > 0, got {value}")
        return cls("degenerate", value=value)

    def mean(self) -> float:
        if self.kind == "exponential":
            return 1.0 / self.rate
        if self.kind == "pareto":
            return self.shape * self.scale / (self.shape - 1.0)
        if self.kind == "discrete":
            return self.law.mean()
        return self.value

    def second_moment(self) -> float:
        if self.kind == "exponential":
            return 2.0 / self.rate**2
        if self.kind == "pareto":
            if self.shape <= 2.0:
                raise DomainError(
                    f"pareto second moment needs shape > 2, got {self.shape}")
            return self.shape * self.scale**2 / (self.shape - 2.0)
        if self.kind == "discrete":
            return self.law.second_moment()
        return self.value**2

    def tail(self, u: float) -> float:
        """Survival function P{X > u}."""
        if self.kind == "exponential":
            return math.exp(-self.rate * u) if u > 0 else 1.0
        if self.kind == "pareto":
            return 1.0 if u <= self.scale else (self.scale / u) ** self.shape
        if self.kind == "degenerate":
            return 1.0 if u < self.value else 0.0
        support = self.law.support
        return float(self.law.probabilities[support > u].sum())

    @property
    def is_subexponential(self) -> bool:
        return self.kind == "pareto"

    def sample(self, rng: np.random.Generator, size) -> np.ndarray:
        if self.kind == "exponential":
            return rng.exponential(1.0 / self.rate, size)
        if self.kind == "pareto":
            return self.scale * (1.0 + rng.pareto(self.shape, size))
        if self.kind == "discrete":
            return self.law.sample(rng, size).astype(float)
        return np.full(size, self.value)

    def sample_sums(self, counts: np.ndarray,
                    rng: np.random.Generator) -> np.ndarray:
        """Sums of ``counts[i]`` iid claims, elementwise over any shape."""
        counts = np.asarray(counts)
        if self.kind == "degenerate":
            return self.value * counts.astype(float)
        if self.kind == "exponential":
            return rng.gamma(counts.astype(float), 1.0 / self.rate)
        flat = counts.ravel()
        draws = self.sample(rng, int(flat.sum()))
        idx = np.repeat(np.arange(flat.size), flat)
        out = np.bincount(idx, weights=draws, minlength=flat.size)
        return out.reshape(counts.shape)


@dataclass(frozen=True)
class RiskConfig:
    """Surplus configuration: initial capital u, safety loading rho, claim
    mean mu, constant premium rate c (MFRP-II only), and the variant."""

    u: float
    rho: float
    mu: float
    variant: Variant = Variant.MFRP
    c: float | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "variant", Variant(self.variant))
        if self.u <= 0:
            raise DomainError(f"initial capital must be > 0, got {self.u}")
        if self.mu <= 0:
            raise DomainError(f"claim mean must be > 0, got {self.mu}")
        if self.variant is Variant.MFRP2:
            if self.c is None or self.c <= 0:
                raise ConfigMismatch("MFRP2 requires a premium rate c > 0")
        if self.rho < 0:
            logger.warning(
                "negative safety loading rho=%s violates the net profit "
                "condition", self.rho)


@dataclass
class SurplusPath:
    """Surplus values on a time grid plus the index of first ruin, if any."""

    grid: Grid
    values: np.ndarray
    ruin_index: int | None = None

    @classmethod
    def from_values(cls, grid: Grid, values: np.ndarray) -> "SurplusPath":
        values = np.asarray(values, dtype=float)
        neg = np.nonzero(values < 0.0)[0]
        return cls(grid, values, int(neg[0]) if neg.size else None)


def _check_claim_mean(cfg: RiskConfig, claims: ClaimModel) -> None:
    if cfg.variant in (Variant.MFRP, Variant.MFRP_VARIANT):
        if abs(claims.mean() - cfg.mu) > 1e-9:
            raise ConfigMismatch(
                f"claim model mean {claims.mean()} != cfg.mu {cfg.mu}")


def _premium(cfg: RiskConfig, p: MixedParams, grid: Grid,
             y_values: np.ndarray) -> np.ndarray:
    if cfg.variant is Variant.MFRP:
        return cfg.mu * (1.0 + cfg.rho) * p.lam * y_values
    if cfg.variant is Variant.MFRP_VARIANT:
        u_det = np.array([mean_inverse(p, float(t)) for t in grid.points])
        return cfg.mu * (1.0 + cfg.rho) * p.lam * u_det
    return cfg.c * grid.points


def simulate_surplus(p: MixedParams, cfg: RiskConfig, claims: ClaimModel,
                     y: InversePath, rng: np.random.Generator) -> SurplusPath:
    """One surplus path on the grid of the supplied inverse-subordinator
    path: u + premium(t) - total claims with MFPP-counted arrivals."""
    _check_claim_mean(cfg, claims)
    counting = simulate_mfpp(p, y, rng)
    ds = claims.sample_sums(np.diff(counting.counts), rng)
    s = np.concatenate(([0.0], np.cumsum(ds)))
    values = cfg.u + _premium(cfg, p, y.grid, y.values) - s
    return SurplusPath.from_values(y.grid, values)


class _SurplusFn:
    """Picklable per-block sampler of R(t) at fixed time points."""

    def __init__(self, p: MixedParams, cfg: RiskConfig, claims: ClaimModel,
                 t: tuple, h_op: float):
        self.p = p
        self.cfg = cfg
        self.claims = claims
        self.t = t
        self.h_op = h_op

    def __call__(self, rng: np.random.Generator, n: int) -> np.ndarray:
        y = _inverse_block(self.p, self.t, self.h_op, rng, n)
        dy = np.diff(y, axis=1, prepend=0.0)
        dn = rng.poisson(self.p.lam * dy)
        ds = self.claims.sample_sums(dn, rng)
        s = np.cumsum(ds, axis=1)
        t_arr = np.asarray(self.t)
        cfg, p = self.cfg, self.p
        if cfg.variant is Variant.MFRP:
            prem = cfg.mu * (1.0 + cfg.rho) * p.lam * y
        elif cfg.variant is Variant.MFRP_VARIANT:
            u_det = np.array([mean_inverse(p, float(x)) for x in t_arr])
            prem = np.broadcast_to(cfg.mu * (1.0 + cfg.rho) * p.lam * u_det,
                                   s.shape)
        else:
            prem = np.broadcast_to(cfg.c * t_arr, s.shape)
        return cfg.u + prem - s


def surplus_ensemble(p: MixedParams, cfg: RiskConfig, claims: ClaimModel,
                     t_values: Sequence[float], n_paths: int,
                     master_seed: int, h_op: float = 1e-3, workers: int = 1,
                     block_size: int = BLOCK_SIZE) -> np.ndarray:
    """Joint samples of the surplus at the given (sorted) times; one row per
    path."""
    _check_claim_mean(cfg, claims)
    t = tuple(float(x) for x in t_values)
    parts = map_blocks(_SurplusFn(p, cfg, claims, t, h_op), n_paths,
                       master_seed, workers, block_size)
    return np.vstack(parts)


@dataclass(frozen=True)
class MartingaleReport:
    """Mean-level check of the martingale property of the Y-premium surplus:
    for rho=0 the mean stays at u; rho>0 / rho<0 give monotone means."""

    rho: float
    times: tuple
    estimates: tuple
    passed: bool
    mode: str


def martingale_check(p: MixedParams, cfg: RiskConfig, claims: ClaimModel,
                     t_list: Sequence[float], n_paths: int, master_seed: int,
                     h_op: float = 1e-3, workers: int = 1) -> MartingaleReport:
    """Monte Carlo check of the unconditional consequence of the martingale
    property (constant / monotone mean); the conditional-expectation version
    is not desk-verifiable and is out of scope."""
    r = surplus_ensemble(p, cfg, claims, t_list, n_paths, master_seed,
                         h_op=h_op, workers=workers)
    ests = tuple(Estimate.from_samples(r[:, j], master_seed)
                 for j in range(r.shape[1]))
    means = [e.value for e in ests]
    if cfg.rho == 0.0:
        mode = "martingale"
        passed = all(abs(e.value - cfg.u) <= 3.0 * e.std_error for e in ests)
    elif cfg.rho > 0.0:
        mode = "submartingale"
        passed = all(b > a for a, b in zip(means, means[1:]))
    else:
        mode = "supermartingale"
        passed = all(b < a for a, b in zip(means, means[1:]))
    return MartingaleReport(cfg.rho, tuple(t_list), ests, passed, mode)


def mfrp_cov(p: MixedParams, cfg: RiskConfig, claims: ClaimModel, s: float,
             t: float, cov_y: float, mean_n_s: float) -> float:
    """Covariance of the Y-premium surplus at 0 <= s <= t:

        mu^2 lam^2 rho^2 Cov(Y(s), Y(t)) + E[X^2] E[N(s)],

    with the Y-covariance and E N(s) supplied by the caller (asymptotic
    formulas or Monte Carlo estimates)."""
    if s > t:
        raise DomainError(f"need s <= t, got s={s} > t={t}")
    return (cfg.mu**2 * p.lam**2 * cfg.rho**2 * cov_y
            + claims.second_moment() * mean_n_s)


def mfrp2_cov(p: MixedParams, claims: ClaimModel, s: float, t: float,
              cov_y: float, mean_n_s: float) -> float:
    """Covariance of the constant-premium surplus at 0 <= s <= t:
    E[X^2] E[N(s)] + lam^2 (E X)^2 Cov(Y(s), Y(t))."""
    if s > t:
        raise DomainError(f"need s <= t, got s={s} > t={t}")
    return (claims.second_moment() * mean_n_s
            + p.lam**2 * claims.mean() ** 2 * cov_y)


def increments(path: SurplusPath, delta: float) -> SamplePath:
    """Increment (noise) process Z(t) = R(t + delta) - R(t) on the sub-grid
    where both endpoints lie on the grid."""
    h = path.grid.h
    k = int(round(delta / h))
    if abs(k * h - delta) > 1e-9 * max(delta, 1.0) or k < 1:
        raise GridError(f"delta={delta} is not a positive grid multiple")
    if k >= path.grid.n:
        raise GridError(f"delta={delta} exceeds the grid horizon")
    v = path.values
    z = v[k:] - v[:-k]
    return SamplePath(Grid(path.grid.points[: path.grid.n - k]), z)


def var_increment_asymptotic(p: MixedParams, claims: ClaimModel, delta: float,
                             t: float) -> float:
    """Large-t variance of the delta-increment of the surplus:
    lam a2 delta E[X^2] t^(a2-1) / (c2 Gamma(a2+1))."""
    if p.c2 == 0.0:
        raise DomainError("increment variance asymptote needs c2 > 0")
    return (p.lam * p.alpha2 * delta * claims.second_moment()
            * t ** (p.alpha2 - 1.0) / (p.c2 * math.gamma(p.alpha2 + 1.0)))


def lrd_exponent(corr_values: Sequence[tuple]) -> float:
    """Least-squares power-law exponent nu from Corr ~ d * t^(-nu):
    the negated slope of log corr against log t."""
    arr = np.asarray(list(corr_values), dtype=float)
    if arr.ndim != 2 or arr.shape[0] < 2:
        raise FitError("need at least two (t, corr) pairs")
    t, c = arr[:, 0], arr[:, 1]
    if (t <= 0).any() or (c <= 0).any() or not np.isfinite(arr).all():
        raise FitError("correlations and times must be positive and finite")
    slope = np.polyfit(np.log(t), np.log(c), 1)[0]
    return float(-slope)


def mfrp_corr_curve(p: MixedParams, cfg: RiskConfig, claims: ClaimModel,
                    s: float, t_values: Sequence[float]) -> list[tuple]:
    """Semi-analytic Corr(R(s), R(t)) for fixed s and large t, built from
    the covariance identity and the large-t asymptotics of the inverse
    subordinator.  Decays like t^(-a2).

    The fixed-s variance uses the same asymptotic formula; it only scales
    the curve and cannot change the fitted exponent.
    """
    ex2 = claims.second_moment()
    a = cfg.mu**2 * p.lam**2 * cfg.rho**2
    num = a * cov_inverse_fixed_s(p, s) + ex2 * p.lam * mean_inverse(p, s)
    var_s = a * var_inverse_asymptotic(p, s) + ex2 * p.lam * mean_inverse(p, s)
    out = []
    for t in t_values:
        var_t = a * var_inverse_asymptotic(p, t) \
            + ex2 * p.lam * mean_inverse_asymptotic(p, t, "large")
        out.append((float(t), num / math.sqrt(var_s * var_t)))
    return out


def mfpnrp_corr_curve(p: MixedParams, cfg: RiskConfig, claims: ClaimModel,
                      s: float, delta: float,
                      t_values: Sequence[float]) -> list[tuple]:
    """Semi-analytic Corr(Z(s), Z(t)) of the increment process for fixed s
    and large t; decays like t^(-(3-a2)/2)."""
    ex2 = claims.second_moment()
    dk = cov_correction_k(p, s + delta) - cov_correction_k(p, s)
    pref = ((1.0 - p.alpha2) * delta * cfg.mu**2 * p.lam**2 * cfg.rho**2 * dk)
    var_s = var_increment_asymptotic(p, claims, delta, s)
    out = []
    for t in t_values:
        num = pref * t ** (p.alpha2 - 2.0)
        var_t = var_increment_asymptotic(p, claims, delta, t)
        out.append((float(t), num / math.sqrt(var_s * var_t)))
    return out
