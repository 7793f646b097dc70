"""Counts of labelled graphs that are disjoint unions of cycles.

``C_t`` is the number of 2-regular simple graphs on ``t`` labelled vertices
(every cycle has length at least 3).  Exact integers come from the
first-cycle recurrence

    C_t = sum_{k=3..t} binom(t-1, k-1) * (k-1)!/2 * C_{t-k},

choosing the cycle through the last vertex.  For large ``t`` the normalised
values ``a_t = C_t / t!`` are kept in floating point; they satisfy
``(t+1) a_{t+1} = t a_t + a_{t-2} / 2`` and tend to ``e^{-3/4}/sqrt(pi t)``,
so they never overflow.
"""
from __future__ import annotations

import math
from functools import lru_cache

__all__ = [
    "EXACT_LIMIT",
    "cycle_union_count",
    "normalised_cycle_count",
    "log_cycle_union_count",
    "cycle_ratio",
]

EXACT_LIMIT = 500

_exact: list[int] = [1, 0, 0]
_norm: list[float] = [1.0, 0.0, 0.0]


def cycle_union_count(t: int) -> int:
    """Exact ``C_t`` for ``0 <= t <= EXACT_LIMIT``."""
    if t < 0:
        raise ValueError("t must be non-negative")
    if t > EXACT_LIMIT:
        raise ValueError(f"exact counts kept up to t={EXACT_LIMIT}; use log_cycle_union_count")
    while len(_exact) <= t:
        s = len(_exact)
        total = 0
        # cycles through vertex s: choose k-1 partners, (k-1)!/2 cyclic orders
        for k in range(3, s + 1):
            total += math.comb(s - 1, k - 1) * _cycles_on(k) * _exact[s - k]
        _exact.append(total)
    return _exact[t]


@lru_cache(maxsize=None)
def _cycles_on(k: int) -> int:
    return math.factorial(k - 1) // 2


def normalised_cycle_count(t: int) -> float:
    """``C_t / t!`` in floating point, any ``t >= 0``."""
    if t < 0:
        raise ValueError("t must be non-negative")
    while len(_norm) <= t:
        s = len(_norm) - 1
        _norm.append((s * _norm[s] + 0.5 * _norm[s - 2]) / (s + 1))
    return _norm[t]


def log_cycle_union_count(t: int) -> float:
    """Natural log of ``C_t``; ``-inf`` for ``t in (1, 2)``."""
    a = normalised_cycle_count(t)
    if a == 0.0:
        return -math.inf
    return math.log(a) + math.lgamma(t + 1)


def cycle_ratio(t: int) -> float:
    """``C_{t+1} / C_t`` for ``t >= 3``, via the normalised values."""
    if t < 3:
        raise ValueError("ratio defined for t >= 3")
    return (t + 1) * normalised_cycle_count(t + 1) / normalised_cycle_count(t)
