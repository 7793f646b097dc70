"""Green path lengths from a uniform permutation of vertices and delimiters.

Given ``g`` green edges and ``N`` spare degree-2 vertices, shuffle the
``N`` vertices together with ``g - 1`` delimiters; the vertices before the
first delimiter extend the first green path, and so on.  Every green path
also carries its two fixed end vertices, so path ``i`` has ``2 + k_i``
internal vertices with ``sum k_i = N``.
"""
from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np
from scipy.stats import binom

__all__ = ["sample_green_lengths", "sample_green_lengths_batch", "TailCheck", "green_tail_bound_check"]

_BATCH_CELLS = 4_000_000


def sample_green_lengths(g: int, N: int, seed=None) -> list[int]:
    """Internal-vertex counts of ``g`` green paths; each >= 2, summing to ``N + 2g``."""
    return sample_green_lengths_batch(g, N, 1, seed)[0].tolist()


def sample_green_lengths_batch(g: int, N: int, size: int, seed=None) -> np.ndarray:
    """``(size, g)`` array of independent draws of :func:`sample_green_lengths`."""
    if g < 1:
        raise ValueError("need at least one green edge")
    if N < 0:
        raise ValueError("N must be non-negative")
    rng = np.random.default_rng(seed)
    slots = N + g - 1
    out = np.empty((size, g), dtype=np.int64)
    if g == 1:
        out[:] = N + 2
        return out
    rows = max(1, _BATCH_CELLS // max(slots, 1))
    for start in range(0, size, rows):
        k = min(rows, size - start)
        # delimiter positions: the g-1 smallest random keys among the slots
        keys = rng.random((k, slots))
        pos = np.sort(np.argpartition(keys, g - 2, axis=1)[:, : g - 1], axis=1) if g - 1 < slots \
            else np.tile(np.arange(slots), (k, 1))
        bounds = np.concatenate([np.full((k, 1), -1), pos, np.full((k, 1), slots)], axis=1)
        out[start:start + k] = np.diff(bounds, axis=1) - 1 + 2
    return out


class TailCheck(NamedTuple):
    empirical: float
    bound: float
    sigma: float
    replicates: int
    holds: bool


def green_tail_bound_check(g: int, N: int, s: int, B: int, replicates: int = 100_000,
                           seed=None) -> TailCheck:
    """Compare ``P(first s internal counts sum above 2s + B)`` with the binomial
    bound ``P(Bin(g - 1, B / N) < s)``.

    The check holds when the Monte Carlo frequency is at most the bound plus
    three binomial standard errors evaluated at the bound.
    """
    if not 0 <= s <= g:
        raise ValueError("need 0 <= s <= g")
    if N < 1:
        raise ValueError("need N >= 1")
    p = min(1.0, B / N)
    bound = float(binom.cdf(s - 1, g - 1, p)) if s > 0 else 0.0
    if s == 0:
        emp = 0.0
    else:
        draws = sample_green_lengths_batch(g, N, replicates, seed)
        emp = float(np.mean(draws[:, :s].sum(axis=1) > 2 * s + B))
    sigma = math.sqrt(bound * (1 - bound) / replicates)
    return TailCheck(emp, bound, sigma, replicates, emp <= bound + 3 * sigma)
