"""Compound mixed fractional Poisson process: random sums of positive
integer claims over MFPP counts, their state probabilities through the
claim-law convolution mixture, moments, and the residual of their governing
fractional differential system."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, GridError
from .mfpp import CountingPath, state_prob_p0, state_prob_pn, state_prob_pn_grid
from .numerics import Grid, GridFunction, caputo_l1
from .subordinators import MixedParams, mean_inverse

__all__ = [
    "DiscreteClaimLaw",
    "simulate_compound",
    "compound_state_prob",
    "compound_fde_residual",
    "compound_overdispersion",
]


@dataclass
class DiscreteClaimLaw:
    """Claim-size law on the positive integers: probabilities[i-1] = P{X = i}."""

    probabilities: np.ndarray
    _convolutions: dict = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        r = np.asarray(self.probabilities, dtype=float)
        if r.ndim != 1 or r.size == 0:
            raise DomainError("need a non-empty probability vector")
        if (r < 0).any() or abs(r.sum() - 1.0) > 1e-12:
            raise DomainError("probabilities must be >= 0 and sum to 1")
        self.probabilities = r

    @property
    def support(self) -> np.ndarray:
        return np.arange(1, self.probabilities.size + 1)

    def mean(self) -> float:
        return float(np.dot(self.support, self.probabilities))

    def second_moment(self) -> float:
        return float(np.dot(self.support**2, self.probabilities))

    def sample(self, rng: np.random.Generator, size) -> np.ndarray:
        return rng.choice(self.support, p=self.probabilities, size=size)

    def k_fold(self, k: int) -> np.ndarray:
        """PMF of X_1 + ... + X_k on 0..k*imax (index = value); k=0 is the
        unit mass at 0.  Cached per law."""
        if k < 0:
            raise DomainError("k must be >= 0")
        if k not in self._convolutions:
            if k == 0:
                pmf = np.array([1.0])
            else:
                prev = self.k_fold(k - 1)
                base = np.concatenate(([0.0], self.probabilities))
                pmf = np.convolve(prev, base)
            self._convolutions[k] = pmf
        return self._convolutions[k]

    def sum_pmf(self, n: int, k: int) -> float:
        """r_n(k) = P{X_1 + ... + X_k = n}; zero outside 0 <= k <= n except
        r_0(0) = 1."""
        pmf = self.k_fold(k)
        return float(pmf[n]) if n < pmf.size else 0.0


def simulate_compound(mfpp_path: CountingPath, law: DiscreteClaimLaw,
                      rng: np.random.Generator) -> GridFunction:
    """Aggregate claim path C(t_i) = sum of N(t_i) iid claims."""
    total = int(mfpp_path.counts[-1])
    claims = law.sample(rng, total) if total else np.empty(0)
    cum = np.concatenate(([0.0], np.cumsum(claims)))
    return GridFunction(mfpp_path.grid, cum[mfpp_path.counts])


def compound_state_prob(p: MixedParams, law: DiscreteClaimLaw, n: int,
                        t: float, method: str = "laplace",
                        grid: Grid | None = None) -> float:
    """q_n(t) = P{C(t) = n} = sum_{k=1}^n r_n(k) p_k(t), with q_0 = p_0."""
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    if n == 0:
        return state_prob_p0(p, t)
    acc = 0.0
    for k in range(1, n + 1):
        rk = law.sum_pmf(n, k)
        if rk > 0.0:
            acc += rk * state_prob_pn(p, k, t, method=method, grid=grid)
    return acc


def _compound_grid(p: MixedParams, law: DiscreteClaimLaw, n: int, grid: Grid,
                   method: str) -> GridFunction:
    if n == 0:
        return state_prob_pn_grid(p, 0, grid, method=method)
    vals = np.zeros(grid.n)
    for k in range(1, n + 1):
        rk = law.sum_pmf(n, k)
        if rk > 0.0:
            vals += rk * state_prob_pn_grid(p, k, grid, method=method).values
    return GridFunction(grid, vals)


def compound_fde_residual(p: MixedParams, law: DiscreteClaimLaw, n: int,
                          grid: Grid, method: str = "laplace") -> GridFunction:
    """Residual of the compound governing system at order n:

        c1 D^{a1} q_n + c2 D^{a2} q_n + lam q_n - lam sum_{i=1}^n r_i q_{n-i},

    identically zero for the exact state probabilities.
    """
    if grid.n < 3:
        raise GridError("grid too short for the residual")
    qs = [_compound_grid(p, law, m, grid, method) for m in range(n + 1)]
    qn = qs[n]
    res = p.lam * qn.values.copy()
    r = law.probabilities
    for i in range(1, n + 1):
        ri = r[i - 1] if i - 1 < r.size else 0.0
        if ri > 0.0:
            res -= p.lam * ri * qs[n - i].values
    if p.c1 > 0:
        res = res + p.c1 * caputo_l1(qn, p.alpha1).values
    if p.c2 > 0:
        res = res + p.c2 * caputo_l1(qn, p.alpha2).values
    return GridFunction(grid, res)


def compound_overdispersion(p: MixedParams, law: DiscreteClaimLaw, t: float,
                            var_y: float) -> float:
    """Var C(t) - E C(t) = lam U(t) (E X^2 - E X) + lam^2 Var(Y) (E X)^2.

    Strictly positive whenever var_y > 0, because claims are >= 1 so
    E X^2 >= E X.
    """
    u = mean_inverse(p, t)
    ex = law.mean()
    ex2 = law.second_moment()
    return p.lam * u * (ex2 - ex) + p.lam**2 * var_y * ex**2
