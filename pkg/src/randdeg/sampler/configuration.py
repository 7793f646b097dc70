"""Configuration model and exact uniform sampling by rejection."""
from __future__ import annotations

import math

import numpy as np

from ..degseq import DegreeSequence
from ..graph import Multigraph

__all__ = [
    "SamplerExhausted",
    "sample_configuration",
    "sample_simple_rejection",
    "simple_probability_estimate",
]

DEFAULT_MAX_TRIES = 10_000


class SamplerExhausted(RuntimeError):
    """Rejection sampling gave up after ``tries`` non-simple matchings."""

    def __init__(self, tries: int):
        super().__init__(f"no simple graph after {tries} configuration-model tries")
        self.tries = tries


def _stubs(D: DegreeSequence) -> np.ndarray:
    return np.repeat(np.arange(D.n, dtype=np.int64), np.asarray(D.degrees, dtype=np.int64))


def _matching(owner: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    # pairing consecutive entries of a uniform permutation gives a uniform matching
    perm = rng.permutation(len(owner))
    partner = np.empty_like(perm)
    partner[perm[0::2]] = perm[1::2]
    partner[perm[1::2]] = perm[0::2]
    return partner


def sample_configuration(D: DegreeSequence, seed=None) -> Multigraph:
    """Uniform perfect matching of the half-edges; loops and multi-edges allowed."""
    rng = np.random.default_rng(seed)
    owner = _stubs(D)
    return Multigraph(D.n, owner, _matching(owner, rng))


def _is_simple_pairing(owner: np.ndarray, partner: np.ndarray, n: int) -> bool:
    h = np.flatnonzero(np.arange(len(partner)) < partner)
    u = owner[h]
    v = owner[partner[h]]
    if np.any(u == v):
        return False
    keys = np.minimum(u, v) * n + np.maximum(u, v)
    keys.sort()
    return not np.any(keys[1:] == keys[:-1])


def _rejection(D: DegreeSequence, rng: np.random.Generator, max_tries: int):
    owner = _stubs(D)
    for tries in range(1, max_tries + 1):
        partner = _matching(owner, rng)
        if _is_simple_pairing(owner, partner, D.n):
            return Multigraph(D.n, owner, partner), tries
    raise SamplerExhausted(max_tries)


def sample_simple_rejection(D: DegreeSequence, seed=None, max_tries: int = DEFAULT_MAX_TRIES) -> Multigraph:
    """Exactly uniform simple graph with degrees ``D``.

    Raises :class:`SamplerExhausted` after ``max_tries`` rejected matchings.
    """
    graph, _ = _rejection(D, np.random.default_rng(seed), max_tries)
    return graph


def simple_probability_estimate(D: DegreeSequence) -> float:
    """Asymptotic probability that the configuration model is simple.

    ``exp(-nu/2 - nu^2/4)`` with ``nu = sum d(d-1) / sum d``; only a guide
    for choosing between rejection and the switching chain.
    """
    total = sum(D.degrees)
    if total == 0:
        return 1.0
    nu = sum(d * (d - 1) for d in D.degrees) / total
    return math.exp(-nu / 2 - nu * nu / 4)
