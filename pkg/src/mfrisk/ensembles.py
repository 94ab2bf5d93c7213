"""Parallel Monte Carlo ensembles with a fixed-block substream contract.

Paths are generated in fixed-size blocks; block b draws its generator from
``SeedSequence(master_seed, spawn_key=(b,))``.  Results therefore depend
only on the master seed and the block size, never on how blocks are
distributed over workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError
from .subordinators import MixedParams, mixed_increments

BLOCK_SIZE = 4096
_STEP_CHUNK = 2048

__all__ = ["Estimate", "BLOCK_SIZE", "block_rng", "map_blocks",
           "inverse_ensemble", "mc_estimate"]


@dataclass(frozen=True)
class Estimate:
    """Monte Carlo point estimate with its sampling uncertainty."""

    value: float
    std_error: float
    n_paths: int
    seed: int
    ci_low: float = math.nan
    ci_high: float = math.nan

    @classmethod
    def from_samples(cls, x: np.ndarray, seed: int) -> "Estimate":
        n = x.size
        m = float(np.mean(x))
        se = float(np.std(x, ddof=1) / math.sqrt(n)) if n > 1 else math.inf
        return cls(m, se, n, seed, m - 1.96 * se, m + 1.96 * se)


def block_rng(master_seed: int, block_index: int) -> np.random.Generator:
    """Deterministic per-block generator, independent of worker layout."""
    return np.random.default_rng(
        np.random.SeedSequence(master_seed, spawn_key=(block_index,)))


def _run_block(fn: Callable, master_seed: int, block_size: int, n_paths: int,
               b: int):
    n = min(block_size, n_paths - b * block_size)
    return fn(block_rng(master_seed, b), n)


def map_blocks(fn: Callable[[np.random.Generator, int], np.ndarray],
               n_paths: int, master_seed: int, workers: int = 1,
               block_size: int = BLOCK_SIZE) -> list:
    """Run ``fn(rng, n)`` over fixed-size path blocks, in block order.

    ``fn`` must be picklable (module-level) when workers > 1.
    """
    if n_paths < 1:
        raise DomainError("n_paths must be >= 1")
    n_blocks = (n_paths + block_size - 1) // block_size
    runner = partial(_run_block, fn, master_seed, block_size, n_paths)
    if workers <= 1 or n_blocks == 1:
        return [runner(b) for b in range(n_blocks)]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(runner, range(n_blocks)))


def _inverse_block(p: MixedParams, t_sorted: tuple, h_op: float,
                   rng: np.random.Generator, n: int) -> np.ndarray:
    """Y(t_j) for one block of paths: adaptive chunked first-passage sweep.

    Returns an (n, len(t_sorted)) matrix.  Y(t) is the pre-jump operational
    grid point, matching ``subordinators.inverse_path``.
    """
    t = np.asarray(t_sorted, dtype=float)
    m = t.size
    Y = np.zeros((n, m))
    nxt = np.zeros(n, dtype=np.int64)
    d_last = np.zeros(n)
    steps_done = np.zeros(n, dtype=np.int64)
    active = np.arange(n)
    while active.size:
        k = active.size
        inc = mixed_increments(p, h_op, rng, (k, _STEP_CHUNK))
        d = np.cumsum(inc, axis=1)
        d += d_last[active][:, None]
        for r in range(k):
            path = active[r]
            j = nxt[path]
            row = d[r]
            hi = int(np.searchsorted(t, row[-1], side="left"))
            if hi > j:
                loc = np.searchsorted(row, t[j:hi], side="right")
                Y[path, j:hi] = (steps_done[path] + loc) * h_op
                nxt[path] = hi
        steps_done[active] += _STEP_CHUNK
        d_last[active] = d[:, -1]
        active = active[nxt[active] < m]
    return Y


def inverse_ensemble(p: MixedParams, t_values: Sequence[float], n_paths: int,
                     h_op: float, master_seed: int, workers: int = 1,
                     block_size: int = BLOCK_SIZE) -> np.ndarray:
    """Matrix of Y(t) samples, one row per path, columns ordered like
    ``t_values`` (which must be non-decreasing)."""
    t = tuple(float(x) for x in t_values)
    if any(b < a for a, b in zip(t, t[1:])) or (len(t) and t[0] < 0):
        raise DomainError("t_values must be non-negative and sorted")
    parts = map_blocks(_InverseFn(p, t, h_op), n_paths, master_seed,
                       workers, block_size)
    return np.vstack(parts)


class _InverseFn:
    """Picklable wrapper for multi-process inverse-path blocks."""

    def __init__(self, p: MixedParams, t: tuple, h_op: float):
        self.p = p
        self.t = t
        self.h_op = h_op

    def __call__(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return _inverse_block(self.p, self.t, self.h_op, rng, n)


def mc_estimate(samples: np.ndarray, seed: int) -> Estimate:
    return Estimate.from_samples(np.asarray(samples, dtype=float), seed)
