"""Two- and three-parameter Mittag-Leffler functions on the real line.

The three-parameter (Prabhakar) function is

    E^gamma_{alpha,beta}(z) = sum_{k>=0} (gamma)_k z^k / (k! Gamma(alpha k + beta)),

with (gamma)_k the rising factorial; gamma=1 gives the two-parameter
function.  Everything here is real-valued: the library never needs complex
arguments.

Evaluation uses two routes, each carrying a running error estimate:

* the power series, with terms generated in log space (sign tracked
  separately) and summed with ``math.fsum``.  For z < 0 the series
  alternates and the achievable absolute accuracy is roughly
  ``eps * max_k |term_k|``, which deteriorates once ``|z|^(1/alpha)``
  grows past ~25;
* the algebraic large-argument expansion for z -> -inf, truncated at its
  smallest term.  For alpha > 2/3 the true remainder is bounded below by an
  exponentially small saddle contribution ``~exp(|z|^(1/alpha) cos(pi/alpha))``
  which the error estimate includes;
* when neither is accurate enough (the band |z|^(1/alpha) in roughly
  [10, 30], worst for gamma > 1 with small beta), a real branch-cut
  integral representation of E_{alpha,beta}(-x), evaluated by adaptive
  quadrature and lifted to integer gamma through the Prabhakar reduction
  E^r_{a,b} = [E^{r-1}_{a,b-1} + (1-b+a(r-1)) E^{r-1}_{a,b}] / (a(r-1)).

``ml3`` picks the route with the smallest internal error estimate.  On the
domain this library uses (alpha in (0,1), integer gamma, z in [-50, 50])
the absolute error stays below ~1e-12; only non-integer gamma with alpha
close to 1 and z deep in the cancellation band falls back to best-effort
accuracy (the saddle floor).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from math import fsum, lgamma

import numpy as np
from scipy.integrate import quad

from .errors import DomainError, NonConvergence

__all__ = ["MLParams", "ml2", "ml3", "ml3_asymptotic"]

# Series stopping rule: next-term bound below TERM_TOL*(1+|sum|) for
# STOP_RUN consecutive terms, hard cap SERIES_CAP terms.
TERM_TOL = 1e-16
STOP_RUN = 3
SERIES_CAP = 10_000

# Abort the series route once a term magnitude exceeds exp(SERIES_ABORT_LOG):
# past that point cancellation has already destroyed double precision.
_SERIES_ABORT_LOG = 80.0

_EPS = 2.2e-16


@dataclass(frozen=True)
class MLParams:
    """Parameter triple (alpha, beta, gamma), all strictly positive."""

    alpha: float
    beta: float
    gamma: float = 1.0

    def __post_init__(self) -> None:
        if not (self.alpha > 0 and self.beta > 0 and self.gamma > 0):
            raise DomainError(
                f"MLParams requires alpha, beta, gamma > 0, got "
                f"({self.alpha}, {self.beta}, {self.gamma})"
            )


def _series_eval(alpha: float, beta: float, gamma: float, z: float):
    """Power series with log-space terms.

    Returns (value, error_estimate, converged).  The estimate is
    ``eps * sum_k |term_k|`` inflated by a small constant; it is meaningful
    only when ``converged`` is True.
    """
    if z == 0.0:
        return 1.0 / math.gamma(beta), 0.0, True
    lz = math.log(abs(z))
    sgn_z = -1.0 if z < 0 else 1.0
    # at z > 0 there is no cancellation, so only overflow limits the series
    abort_log = 690.0 if z > 0 else _SERIES_ABORT_LOG
    lpoch = 0.0  # log((gamma)_k / k!)
    sgn = 1.0
    terms = []
    partial = 0.0
    abs_sum = 0.0
    run = 0
    for k in range(SERIES_CAP):
        lt = lpoch + k * lz - lgamma(alpha * k + beta)
        if lt > abort_log:
            return math.nan, math.inf, False
        t = sgn * math.exp(lt)
        terms.append(t)
        partial += t
        abs_sum += abs(t)
        # bound for the next term
        lnext = lpoch + math.log(gamma + k) - math.log(k + 1) + (k + 1) * lz \
            - lgamma(alpha * (k + 1) + beta)
        if math.exp(min(lnext, 700.0)) < TERM_TOL * (1.0 + abs(partial)):
            run += 1
            if run >= STOP_RUN:
                break
        else:
            run = 0
        lpoch += math.log(gamma + k) - math.log(k + 1)
        sgn *= sgn_z
    else:
        return fsum(terms), 8.0 * _EPS * abs_sum, False
    return fsum(terms), 8.0 * _EPS * abs_sum, True


def _recip_gamma(x: float) -> float:
    """1/Gamma(x) for real x, zero at the poles, sign handled."""
    if x > 0.5:
        return math.exp(-lgamma(x))
    s = math.sin(math.pi * x)
    if s == 0.0:
        return 0.0
    lg = lgamma(1.0 - x)
    if lg > 700.0:
        return 0.0
    return math.exp(lg) * s / math.pi


def _asym_eval(alpha: float, beta: float, gamma: float, z: float):
    """Algebraic expansion for z -> -inf, optimally truncated.

    E^g_{a,b}(-x) ~ sum_j (-1)^j (g)_j x^{-g-j} / (j! Gamma(b - a(g+j))).
    Returns (value, error_estimate).  The estimate combines the first
    neglected term's envelope with the saddle floor present for a > 2/3.
    """
    x = -z
    if x < 1.5:
        return math.nan, math.inf
    lx = math.log(x)
    lpoch = 0.0
    sgn = 1.0
    vals = []
    prev_env = math.inf
    env_stop = math.inf
    for j in range(SERIES_CAP):
        arg = beta - alpha * (gamma + j)
        lmag = lpoch + (-gamma - j) * lx
        if arg < -170.0 or lmag < -700.0:
            env_stop = math.exp(max(lmag, -700.0))
            break
        rg = _recip_gamma(arg)
        # envelope of |1/Gamma| near arg, so pole zeros do not fool the
        # truncation rule
        if arg > 0.5:
            env = abs(rg) * math.exp(lmag)
        else:
            env = math.exp(min(lgamma(1.0 - arg) + lmag, 700.0)) / math.pi
        if j > 1 and env > prev_env:
            env_stop = prev_env
            break
        vals.append(sgn * math.exp(lmag) * rg)
        prev_env = env
        lpoch += math.log(gamma + j) - math.log(j + 1)
        sgn = -sgn
    if not vals:
        return math.nan, math.inf
    est = env_stop
    if alpha > 2.0 / 3.0:
        # saddle contribution exp(w cos(pi/alpha)), w = x^(1/alpha)
        w = x ** (1.0 / alpha)
        c = math.cos(math.pi / alpha)
        lfloor = w * c + (gamma - beta) * math.log(w) \
            + math.log(2.0) - lgamma(gamma) - gamma * math.log(alpha)
        est += math.exp(min(lfloor, 700.0))
    return fsum(vals), est + 4.0 * _EPS * abs(vals[0])


def _ml2_cut_integral(alpha: float, beta: float, x: float) -> float:
    """E_{alpha,beta}(-x) for 0 < alpha < 1, beta <= 1, x > 0, through the
    branch-cut integral (u = r^{1/alpha} substituted):

        (1/pi) int_0^inf u^{alpha-beta} e^{-u}
            [u^alpha sin(pi(1-beta)) + x sin(pi(1-beta+alpha))]
            / (u^{2 alpha} + 2 u^alpha x cos(alpha pi) + x^2) du.

    The denominator develops a sharp minimum near u0 = x^{1/alpha} as
    alpha -> 1 (the conjugate pole pair approaching the cut), so the range
    is split there for the adaptive quadrature.
    """
    s1 = math.sin(math.pi * (1.0 - beta))
    s2 = math.sin(math.pi * (1.0 - beta + alpha))
    c = math.cos(alpha * math.pi)

    def f(u: float) -> float:
        ua = u ** alpha
        return (u ** (alpha - beta) * math.exp(-u) * (ua * s1 + x * s2)
                / (ua * ua + 2.0 * ua * x * c + x * x)) / math.pi

    u0 = x ** (1.0 / alpha)
    pieces = sorted({0.0, min(u0, 700.0), min(2.0 * u0, 700.0), 700.0})
    total = 0.0
    with warnings.catch_warnings():
        # quadpack's roundoff warnings fire even when the result is fine;
        # accuracy is tracked by this module's own estimates
        warnings.simplefilter("ignore")
        for lo, hi in zip(pieces, pieces[1:]):
            if hi > lo:
                total += quad(f, lo, hi, limit=200, epsabs=1e-14,
                              epsrel=1e-12)[0]
    return total


def _ml2_neg_integral(alpha: float, beta: float, x: float) -> float:
    """E_{alpha,beta}(-x) for any real beta: anchor beta - m*alpha <= 1 and
    climb back with E_{a,b+a}(z) = (E_{a,b}(z) - 1/Gamma(b)) / z, which
    shrinks the quadrature error by x per step."""
    m = max(0, math.ceil((beta - 1.0) / alpha - 1e-12))
    b0 = beta - m * alpha
    val = _ml2_cut_integral(alpha, b0, x)
    for j in range(m):
        val = (val - _recip_gamma(b0 + j * alpha)) / (-x)
    return val


_INT_GAMMA_CAP = 12


def _integral_eval(alpha: float, beta: float, gamma: float, z: float):
    """Quadrature route for z < 0, 0 < alpha < 1 and integer gamma.

    Returns (value, error_estimate); (nan, inf) when not applicable.
    """
    g = int(round(gamma))
    if not (z < 0 and 0.0 < alpha < 1.0 and 1 <= g <= _INT_GAMMA_CAP
            and abs(gamma - g) < 1e-12):
        return math.nan, math.inf
    x = -z
    row = [_ml2_neg_integral(alpha, beta - j, x) for j in range(g)]
    for r in range(2, g + 1):
        row = [
            (row[j + 1] + (1.0 - (beta - j) + alpha * (r - 1)) * row[j])
            / (alpha * (r - 1))
            for j in range(g - r + 1)
        ]
    # quadrature delivers ~1e-14 relative; the reduction amplifies mildly
    est = 1e-13 * (1.0 + abs(row[0])) * (1.0 + g * g)
    return row[0], est


def ml3(p: MLParams, z: float) -> float:
    """Three-parameter Mittag-Leffler function E^gamma_{alpha,beta}(z).

    Raises NonConvergence when the series truncation rule cannot be met
    within the term cap and no accurate fallback exists.
    """
    return _ml3_with_estimate(p, z)[0]


def _ml3_with_estimate(p: MLParams, z: float, refine: bool = True):
    """ml3 value together with its internal absolute-error estimate.

    ``refine=False`` skips the quadrature fallback: callers that merely need
    an honest estimate for noise-floor bookkeeping (the outer series of the
    process pipelines) get the cheap routes only.
    """
    if not math.isfinite(z):
        raise DomainError(f"ml3 requires finite z, got {z}")
    val, est, converged = _series_eval(p.alpha, p.beta, p.gamma, z)
    if converged and est <= 1e-13 * (1.0 + abs(val)):
        return val, est
    if z >= 0:
        if converged:
            return val, est
        raise NonConvergence(
            f"ml3 series did not converge within {SERIES_CAP} terms at z={z}"
        )
    aval, aest = _asym_eval(p.alpha, p.beta, p.gamma, z)
    if math.isfinite(aest) and aest <= 1e-13 * (1.0 + abs(aval)):
        return aval, aest
    ival, iest = _integral_eval(p.alpha, p.beta, p.gamma, z) if refine \
        else (math.nan, math.inf)
    candidates = [(e, v) for v, e in ((val, est if converged else math.inf),
                                      (aval, aest), (ival, iest))
                  if math.isfinite(e)]
    if not candidates:
        raise NonConvergence(
            f"ml3: series cap hit and no accurate fallback at z={z}")
    e, v = min(candidates, key=lambda p_: p_[0])
    return v, e


def ml2(alpha: float, beta: float, z: float) -> float:
    """Two-parameter Mittag-Leffler function E_{alpha,beta}(z)."""
    return ml3(MLParams(alpha, beta, 1.0), z)


def ml3_asymptotic(p: MLParams, lam: float, t: float) -> float:
    """Leading large-t behaviour of E^gamma_{alpha,beta}(-lam * t^alpha):

        lam^{-gamma} t^{-alpha gamma} / Gamma(beta - alpha gamma).

    Only valid for beta != alpha*gamma (the Gamma factor has poles).
    """
    if lam <= 0 or t <= 0:
        raise DomainError("ml3_asymptotic requires lam > 0 and t > 0")
    d = p.beta - p.alpha * p.gamma
    if abs(d) < 1e-12 or (d < 0 and abs(d - round(d)) < 1e-12):
        raise DomainError(
            f"ml3_asymptotic undefined at Gamma pole beta - alpha*gamma = {d}"
        )
    return lam ** (-p.gamma) * t ** (-p.alpha * p.gamma) * _recip_gamma(d)


def ml3_vec_with_estimate(alpha: float, beta: float, gamma: float,
                          z: np.ndarray, cap: int = SERIES_CAP,
                          refine: bool = True) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized power-series evaluation plus per-entry error estimates.

    Intended for the closed-form pipelines, whose arguments stay in the
    series-friendly region; any entry whose series cannot reach ~1e-13
    absolute accuracy is re-done through the scalar hybrid (and inherits
    its estimate).
    """
    z = np.asarray(z, dtype=float)
    out = np.zeros_like(z)
    if not np.isfinite(z).all():
        raise DomainError("ml3_vec_with_estimate requires finite arguments")
    lgb = lgamma(beta)
    term = np.full(z.shape, math.exp(-lgb) if lgb < 700 else 0.0)
    # term_k = (gamma)_k z^k / (k! Gamma(alpha k + beta)); advance by ratio
    out[:] = term
    abs_sum = np.abs(term)
    live = np.ones(z.shape, dtype=bool)
    run = np.zeros(z.shape, dtype=np.int32)
    lg_prev = lgb
    for k in range(cap):
        lg_next = lgamma(alpha * (k + 1) + beta)
        ratio = (gamma + k) / (k + 1.0) * math.exp(lg_prev - lg_next)
        term = term * z * ratio
        out += np.where(live, term, 0.0)
        abs_sum += np.where(live, np.abs(term), 0.0)
        small = np.abs(term) < TERM_TOL * (1.0 + np.abs(out))
        run = np.where(small, run + 1, 0)
        live &= run < STOP_RUN
        lg_prev = lg_next
        if not live.any():
            break
    est = 8.0 * _EPS * abs_sum
    bad = live | (est > 1e-13 * (1.0 + np.abs(out)))
    if bad.any():
        p = MLParams(alpha, beta, gamma)
        flat = out.reshape(-1)
        eflat = est.reshape(-1)
        zflat = z.reshape(-1)
        for i in np.nonzero(bad.reshape(-1))[0]:
            flat[i], eflat[i] = _ml3_with_estimate(p, float(zflat[i]),
                                                   refine=refine)
    return out, est


def ml3_series_vec(alpha: float, beta: float, gamma: float,
                   z: np.ndarray, cap: int = SERIES_CAP) -> np.ndarray:
    """Vectorized Mittag-Leffler values over an array of arguments."""
    return ml3_vec_with_estimate(alpha, beta, gamma, z, cap)[0]
