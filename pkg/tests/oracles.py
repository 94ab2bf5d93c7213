"""Independent oracles for the test suite: extended-precision series,
bisection root finding, and quadrature helpers.  These deliberately avoid
the library's own evaluation paths."""

import math

import mpmath as mp
import numpy as np
from scipy.integrate import quad


def ml3_oracle(alpha: float, beta: float, gamma: float, z: float,
               min_dps: int = 50) -> float:
    """Three-parameter Mittag-Leffler by direct mpmath summation, with the
    working precision raised enough to absorb the alternating-series
    cancellation (max term ~ exp(|z|^(1/alpha)))."""
    x = abs(z)
    need = min_dps if x <= 1 else \
        max(min_dps, int(float(x ** (1.0 / alpha)) / math.log(10)) + 50)
    mp.mp.dps = need
    a, b, g, zz = map(mp.mpf, (alpha, beta, gamma, z))
    s = mp.mpf(0)
    poch = mp.mpf(1)
    for k in range(500_000):
        t = poch * zz**k / mp.gamma(a * k + b)
        s += t
        poch = poch * (g + k) / (k + 1)
        if k > 20 and abs(t) < mp.mpf(10) ** (-need + 8) * (1 + abs(s)):
            break
    return float(s)


def ml2_oracle(alpha: float, beta: float, z: float) -> float:
    return ml3_oracle(alpha, beta, 1.0, z)


def bisect_root(f, lo: float, hi: float, iters: int = 200) -> float:
    """Plain bisection; assumes a sign change on [lo, hi]."""
    flo = f(lo)
    if flo * f(hi) > 0:
        raise ValueError("no sign change on the bracket")
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if flo * f(mid) <= 0:
            hi = mid
        else:
            lo = mid
            flo = f(lo)
    return 0.5 * (lo + hi)


def interarrival_cdf_quad(p, t: float) -> float:
    """CDF of the interarrival time by quadrature of the library density;
    used for distributional (KS) checks of the samplers."""
    from mfrisk.mfpp import interarrival_density

    val, _ = quad(lambda s: interarrival_density(p, s), 1e-12, t, limit=200)
    return val


def stable_median_oracle(alpha: float) -> float:
    """Median of the one-sided stable law with transform e^{-s^alpha},
    through scipy's S1-parameterized stable distribution."""
    from scipy.stats import levy_stable

    scale = math.cos(math.pi * alpha / 2.0) ** (1.0 / alpha)
    return float(levy_stable.ppf(0.5, alpha, 1.0, loc=0.0, scale=scale))


def caputo_power(t: np.ndarray, power: float, alpha: float) -> np.ndarray:
    """Closed-form Caputo derivative of t^power for power > 0:
    Gamma(power+1)/Gamma(power+1-alpha) * t^(power-alpha)."""
    c = math.gamma(power + 1.0) / math.gamma(power + 1.0 - alpha)
    return c * np.power(t, power - alpha)
