"""Edge switchings and the switching Markov chain.

A switching takes ordered edges ``ab`` and ``xy`` with ``b != x``,
``a != y`` and ``xb, ay`` absent, and replaces them by ``xb`` and ``ay``.
Every degree is preserved, and switching ``xb, ay`` in the result restores
the original graph.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .. import _kernels
from ..degseq import DegreeSequence, DegreeSequenceError
from ..graph import GraphError, Multigraph

__all__ = [
    "InadmissibleSwitch",
    "SwitchMove",
    "is_admissible",
    "apply_switch",
    "admissible_switches",
    "random_switch",
    "havel_hakimi",
    "default_burn_in",
    "sample_uniform_mcmc",
    "switching_bound",
]

CHUNK = 10_000


class InadmissibleSwitch(GraphError):
    pass


@dataclass(frozen=True)
class SwitchMove:
    """Switch on ordered edges ``(a, b)`` and ``(x, y)``."""

    a: int
    b: int
    x: int
    y: int

    @property
    def removed(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return (self.a, self.b), (self.x, self.y)

    @property
    def added(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return (self.x, self.b), (self.a, self.y)

    def reverse(self) -> "SwitchMove":
        """The move on ``(x, b), (a, y)`` that undoes this one."""
        return SwitchMove(self.x, self.b, self.a, self.y)


def _edge_index(G: Multigraph) -> dict[tuple[int, int], int]:
    index = {}
    for i, (u, v) in enumerate(G.edges.tolist()):
        index[(u, v)] = i
        index[(v, u)] = i
    return index


def _why_not(G: Multigraph, move: SwitchMove, index) -> str | None:
    a, b, x, y = move.a, move.b, move.x, move.y
    if (a, b) not in index or (x, y) not in index:
        return "switched pairs must be edges"
    if b == x or a == y:
        return "b == x or a == y"
    if (x, b) in index or (a, y) in index:
        return "replacement edge already present"
    return None


def is_admissible(G: Multigraph, move: SwitchMove) -> bool:
    if not G.is_simple:
        raise GraphError("switchings are defined on simple graphs")
    return _why_not(G, move, _edge_index(G)) is None


def apply_switch(G: Multigraph, move: SwitchMove) -> Multigraph:
    """Return the switched graph; raises :class:`InadmissibleSwitch` otherwise."""
    if not G.is_simple:
        raise GraphError("switchings are defined on simple graphs")
    index = _edge_index(G)
    reason = _why_not(G, move, index)
    if reason:
        raise InadmissibleSwitch(f"{move}: {reason}")
    edges = G.edges.copy()
    edges[index[(move.a, move.b)]] = (move.x, move.b)
    edges[index[(move.x, move.y)]] = (move.a, move.y)
    return Multigraph.from_edges(G.n, edges)


def admissible_switches(G: Multigraph) -> list[SwitchMove]:
    """Every admissible move on ``G`` (quadratic in the edge count)."""
    if not G.is_simple:
        raise GraphError("switchings are defined on simple graphs")
    index = _edge_index(G)
    oriented = [e for e in index]
    moves = []
    for a, b in oriented:
        for x, y in oriented:
            mv = SwitchMove(a, b, x, y)
            if _why_not(G, mv, index) is None:
                moves.append(mv)
    return moves


def random_switch(G: Multigraph, rng) -> SwitchMove:
    """Uniform ordered pair of oriented edges; possibly inadmissible."""
    rng = np.random.default_rng(rng)
    e = G.edges
    i, j = rng.integers(0, len(e), size=2)
    f = int(rng.integers(0, 4))
    a, b = e[i] if not f & 1 else e[i][::-1]
    x, y = e[j] if not f & 2 else e[j][::-1]
    return SwitchMove(int(a), int(b), int(x), int(y))


def havel_hakimi(D: DegreeSequence) -> Multigraph:
    """Deterministic realisation: repeatedly join a largest-residual vertex to
    the next-largest residuals (ties broken towards higher labels)."""
    degs = list(D.degrees)
    n = len(degs)
    top = max(degs, default=0)
    buckets: list[list[int]] = [[] for _ in range(top + 1)]
    for v, d in enumerate(degs):
        buckets[d].append(v)
    residual = degs[:]
    hi = top
    edges = []
    for _ in range(n):
        while hi > 0 and not buckets[hi]:
            hi -= 1
        if hi == 0:
            break
        v = buckets[hi].pop()
        need = residual[v]
        residual[v] = 0
        taken = []
        level = hi
        while len(taken) < need:
            while level > 0 and not buckets[level]:
                level -= 1
            if level == 0:
                raise DegreeSequenceError(f"sequence {D.degrees[:10]}... is not graphical")
            take = min(need - len(taken), len(buckets[level]))
            for _ in range(take):
                taken.append(buckets[level].pop())
            level -= 1
        for w in taken:
            edges.append((v, w))
            residual[w] -= 1
            if residual[w]:
                buckets[residual[w]].append(w)
    return Multigraph.from_edges(n, edges)


def default_burn_in(m: int) -> int:
    return math.ceil(10 * m * math.log(m + 1))


def run_chain(G: Multigraph, steps: int, rng: np.random.Generator,
              validate: bool = False) -> tuple[Multigraph, int]:
    """Run ``steps`` lazy switching proposals from ``G``; returns the final
    graph and the number of accepted moves."""
    e = G.edges
    chain = _kernels.SwitchChain(G.n, e[:, 0], e[:, 1])
    m = len(e)
    accepted = 0
    if m >= 2:
        remaining = steps
        while remaining > 0:
            k = min(CHUNK, remaining)
            e1 = rng.integers(0, m, size=k)
            e2 = rng.integers(0, m, size=k)
            flips = rng.integers(0, 4, size=k, dtype=np.uint8)
            accepted += chain.run(e1, e2, flips)
            remaining -= k
            if validate:
                eu, ev = chain.edges()
                deg = np.bincount(np.concatenate([eu, ev]), minlength=G.n)
                if not np.array_equal(deg, G.degrees):
                    raise AssertionError("switching chain changed a degree")
    eu, ev = chain.edges()
    return Multigraph.from_edges(G.n, np.stack([eu, ev], axis=1)), accepted


def sample_uniform_mcmc(D: DegreeSequence, seed=None, burn_in: int | None = None,
                        validate: bool = False) -> Multigraph:
    """Simple graph after ``burn_in`` proposals of the switching chain.

    Each proposal is a uniform ordered pair of oriented edges, applied iff
    admissible.  The chain starts from :func:`havel_hakimi`; the default
    burn-in is ``ceil(10 m ln(m + 1))``.
    """
    rng = np.random.default_rng(seed)
    start = havel_hakimi(D)
    steps = default_burn_in(D.m) if burn_in is None else int(burn_in)
    graph, _ = run_chain(start, steps, rng, validate=validate)
    return graph


def switching_bound(delta_A: float, Delta_B: float, size_B: float) -> float:
    """``|A| <= Delta_B * |B| / delta_A`` for a switching bipartite pairing.

    ``delta_A``: minimum number of switchings from each graph in ``A`` into
    ``B``; ``Delta_B``: maximum number from each graph in ``B`` back to ``A``.
    """
    if delta_A <= 0:
        raise ValueError("delta_A must be positive")
    return Delta_B * size_B / delta_A
