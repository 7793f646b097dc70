"""Half-edge multigraphs, components, BFS metrics and set functionals."""
from __future__ import annotations

import math
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from . import _kernels

__all__ = [
    "GraphError",
    "Multigraph",
    "SetStats",
    "CycleComponents",
    "ProfilePoint",
    "components",
    "component_subgraphs",
    "diameter",
    "diameter_lower_bound",
    "bfs_distances",
    "cycle_components",
    "set_stats",
    "dyadic_levels",
    "cond_profile_exact",
    "cond_profile_heuristic",
    "cond_profile_enumerated",
    "ProfileTooLarge",
    "conductance_profile",
    "DEFAULT_COND_CUTOFF",
]

DEFAULT_COND_CUTOFF = 16
DEFAULT_MAX_SETS = 2_000_000


class GraphError(ValueError):
    """Operation not defined for the given graph."""


class ProfileTooLarge(GraphError):
    """Exact enumeration would visit more connected sets than allowed."""


class Multigraph:
    """Labelled multigraph stored as a perfect matching of half-edges.

    Vertices are ``0..n-1``.  Half-edges are numbered so that those owned by
    vertex ``v`` form the block ``offsets[v]:offsets[v + 1]``; ``partner``
    is the matching (an involution without fixed points).  A loop uses two
    half-edges of the same vertex and so adds 2 to its degree.

    Instances are treated as immutable; the arrays are flagged read-only.
    """

    def __init__(self, n: int, owner: np.ndarray, partner: np.ndarray):
        owner = np.asarray(owner, dtype=np.int64)
        partner = np.asarray(partner, dtype=np.int64)
        if owner.shape != partner.shape or len(owner) % 2:
            raise GraphError("half-edge arrays must have equal, even length")
        if len(owner) and (np.any(np.diff(owner) < 0) or owner[0] < 0 or owner[-1] >= n):
            raise GraphError("half-edges must be grouped by owner in 0..n-1")
        h = np.arange(len(partner))
        if len(partner) and (np.any(partner[partner] != h) or np.any(partner == h)):
            raise GraphError("pairing must be a fixed-point-free involution")
        owner.setflags(write=False)
        partner.setflags(write=False)
        self.n = int(n)
        self.owner = owner
        self.partner = partner

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Multigraph":
        """Build from an edge list; half-edges follow the edge order."""
        e = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64)
        e = e.reshape(-1, 2)
        if len(e) and (e.min() < 0 or e.max() >= n):
            raise GraphError("edge endpoint out of range")
        ends = e.reshape(-1)
        order = np.argsort(ends, kind="stable")
        pos = np.empty_like(order)
        pos[order] = np.arange(len(order))
        partner = np.empty_like(order)
        partner[pos] = pos[np.arange(len(order)) ^ 1]
        return cls(n, ends[order], partner)

    # -- basic counts -----------------------------------------------------

    @property
    def m(self) -> int:
        return len(self.owner) // 2

    @cached_property
    def degrees(self) -> np.ndarray:
        d = np.bincount(self.owner, minlength=self.n).astype(np.int64)
        d.setflags(write=False)
        return d

    @cached_property
    def offsets(self) -> np.ndarray:
        off = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(self.degrees, out=off[1:])
        off.setflags(write=False)
        return off

    @cached_property
    def edges(self) -> np.ndarray:
        """``(m, 2)`` endpoint array, one row per matched pair of half-edges."""
        h = np.flatnonzero(np.arange(len(self.partner)) < self.partner)
        e = np.stack([self.owner[h], self.owner[self.partner[h]]], axis=1)
        e.setflags(write=False)
        return e

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        """``(indptr, indices)`` with one entry per half-edge (loops twice)."""
        indices = self.owner[self.partner]
        indices.setflags(write=False)
        return self.offsets, indices

    def neighbours(self, v: int) -> np.ndarray:
        indptr, indices = self.csr
        return indices[indptr[v]:indptr[v + 1]]

    @cached_property
    def loop_count(self) -> int:
        e = self.edges
        return int(np.count_nonzero(e[:, 0] == e[:, 1]))

    @cached_property
    def is_simple(self) -> bool:
        if self.loop_count:
            return False
        e = np.sort(self.edges, axis=1)
        keys = e[:, 0] * max(self.n, 1) + e[:, 1]
        return len(np.unique(keys)) == len(keys)

    def canonical_edges(self) -> list[tuple[int, int]]:
        """Sorted multiset of ``(min, max)`` endpoint pairs."""
        e = np.sort(self.edges, axis=1)
        return sorted(map(tuple, e.tolist()))

    def __eq__(self, other):
        if not isinstance(other, Multigraph):
            return NotImplemented
        return self.n == other.n and self.canonical_edges() == other.canonical_edges()

    def __hash__(self):
        return hash((self.n, tuple(self.canonical_edges())))

    def __repr__(self):
        return f"Multigraph(n={self.n}, m={self.m}, simple={self.is_simple})"

    def subgraph(self, vertices: Iterable[int]) -> tuple["Multigraph", np.ndarray]:
        """Induced subgraph, relabelled ``0..k-1`` in increasing label order.

        Returns the subgraph and the array of original labels.
        """
        labels = np.unique(np.asarray(list(vertices), dtype=np.int64))
        index = np.full(self.n, -1, dtype=np.int64)
        index[labels] = np.arange(len(labels))
        e = self.edges
        keep = (index[e[:, 0]] >= 0) & (index[e[:, 1]] >= 0)
        return Multigraph.from_edges(len(labels), index[e[keep]]), labels

    @cached_property
    def multiplicity(self) -> np.ndarray:
        """Dense ``(n, n)`` count of half-edges of ``v`` paired into ``w``."""
        mult = np.zeros((self.n, self.n), dtype=np.int64)
        np.add.at(mult, (self.owner, self.owner[self.partner]), 1)
        mult.setflags(write=False)
        return mult


# ---------------------------------------------------------------- components


def components(G: Multigraph) -> list[list[int]]:
    """Vertex sets of the connected components, ordered by least vertex."""
    if G.n == 0:
        return []
    indptr, indices = G.csr
    A = csr_matrix((np.ones(len(indices), dtype=np.int8), indices, indptr), shape=(G.n, G.n))
    k, labels = connected_components(A, directed=False)
    order = np.argsort(labels, kind="stable")
    bounds = np.cumsum(np.bincount(labels, minlength=k))[:-1]
    parts = [p.tolist() for p in np.split(order, bounds)]
    parts.sort(key=lambda p: p[0])
    return parts


def component_subgraphs(G: Multigraph) -> list[tuple[Multigraph, np.ndarray]]:
    """``(subgraph, labels)`` for each component, largest first (ties: least vertex)."""
    parts = sorted(components(G), key=lambda p: (-len(p), p[0]))
    return [G.subgraph(p) for p in parts]


def eccentricities(G: Multigraph, sources: Iterable[int] | None = None) -> np.ndarray:
    indptr, indices = G.csr
    src = np.arange(G.n) if sources is None else np.asarray(list(sources), dtype=np.int64)
    ecc, reached = _kernels.eccentricities(indptr, indices, src)
    if np.any(reached != G.n):
        raise GraphError("graph is not connected")
    return ecc


def diameter(G: Multigraph) -> int:
    """Largest shortest-path distance; BFS from every vertex."""
    if G.n == 0:
        raise GraphError("diameter of the empty graph is undefined")
    return int(eccentricities(G).max())


def bfs_distances(G: Multigraph, sources: Iterable[int]) -> np.ndarray:
    """Hop distance from the nearest source; ``-1`` where unreachable."""
    indptr, indices = G.csr
    dist = np.full(G.n, -1, dtype=np.int64)
    frontier = np.unique(np.asarray(list(sources), dtype=np.int64))
    dist[frontier] = 0
    level = 0
    while frontier.size:
        level += 1
        lo, hi = indptr[frontier], indptr[frontier + 1]
        sizes = hi - lo
        # gather every neighbour of the frontier in one pass
        pos = np.repeat(lo - np.cumsum(sizes) + sizes, sizes) + np.arange(sizes.sum())
        nxt = np.unique(indices[pos])
        nxt = nxt[dist[nxt] < 0]
        dist[nxt] = level
        frontier = nxt
    return dist


def diameter_lower_bound(G: Multigraph, sweeps: int = 4) -> int:
    """Repeated farthest-vertex sweeps from vertex 0; exact on trees."""
    if G.n == 0:
        raise GraphError("diameter of the empty graph is undefined")
    best, v = -1, 0
    for _ in range(max(sweeps, 1)):
        dist = bfs_distances(G, [v])
        if (dist < 0).any():
            raise GraphError("graph is not connected")
        far = int(np.argmax(dist))
        if dist[far] <= best:
            break
        best, v = int(dist[far]), far
    return best


class CycleComponents(NamedTuple):
    parts: list[list[int]]
    cyc: int

    def subgraph(self, G: Multigraph) -> tuple[Multigraph, np.ndarray]:
        return G.subgraph([v for p in self.parts for v in p])


def cycle_components(G: Multigraph) -> CycleComponents:
    """Components that are single cycles, and their total vertex count."""
    deg = G.degrees
    parts = [p for p in components(G) if all(deg[v] == 2 for v in p)]
    return CycleComponents(parts, sum(len(p) for p in parts))


# ---------------------------------------------------------------- set functionals


class SetStats(NamedTuple):
    size: int
    d: int
    out: int
    ex: int
    cond: float


def set_stats(G: Multigraph, S: Iterable[int]) -> SetStats:
    """Volume, boundary, excess ``d(S) - 2|S| + 2`` and conductance of ``S``."""
    members = np.unique(np.asarray(list(S), dtype=np.int64))
    if len(members) == 0:
        raise GraphError("set must be nonempty")
    inside = np.zeros(G.n, dtype=bool)
    inside[members] = True
    d = int(G.degrees[members].sum())
    h = np.flatnonzero(inside[G.owner])
    out = int(np.count_nonzero(~inside[G.owner[G.partner[h]]]))
    cond = out / d if d else math.inf
    return SetStats(len(members), d, out, d - 2 * len(members) + 2, cond)


# ---------------------------------------------------------------- conductance


class ProfilePoint(NamedTuple):
    j: int
    x: int
    value: float
    exact: bool


def dyadic_levels(G: Multigraph) -> list[int]:
    """``j = 1 .. ceil(log2 d(V)) - 1``, the levels entering the profile sums."""
    vol = int(G.degrees.sum())
    if vol <= 1:
        return []
    return list(range(1, (vol - 1).bit_length()))


def _window(x: float, vol: int) -> tuple[float, float]:
    return x / 2.0, min(float(x), vol / 2.0)


def _check_connected(G: Multigraph):
    if G.n == 0 or len(components(G)) != 1:
        raise GraphError("conductance profile needs a connected component")


def _subset_table(G: Multigraph):
    table = G.__dict__.get("_subset_table")
    if table is None:
        _, vol, out = _kernels.connected_subset_stats(G.multiplicity)
        table = (vol, out / np.maximum(vol, 1))
        G.__dict__["_subset_table"] = table
    return table


def cond_profile_exact(G: Multigraph, x: float, cutoff: int = DEFAULT_COND_CUTOFF) -> float:
    """Minimum of ``out(S)/d(S)`` over connected ``S`` with
    ``x/2 <= d(S) <= min(x, d(V)/2)``; ``inf`` if no set qualifies.

    Exhaustive over all vertex subsets, so ``G`` may have at most ``cutoff``
    vertices.
    """
    if x <= 0:
        raise GraphError("x must be positive")
    if G.n > cutoff:
        raise GraphError(f"component has {G.n} vertices, exact cutoff is {cutoff}")
    _check_connected(G)
    vol_all = int(G.degrees.sum())
    lo, hi = _window(x, vol_all)
    vol, cond = _subset_table(G)
    sel = (vol >= lo) & (vol <= hi)
    return float(cond[sel].min()) if sel.any() else math.inf


def cond_profile_heuristic(G: Multigraph, x: float, sources: Iterable[int] | None = None) -> float:
    """Upper bound on the conductance profile at ``x``.

    Candidates are the prefixes of the BFS order from each source (every BFS
    ball is such a prefix); all prefixes are connected.
    """
    if x <= 0:
        raise GraphError("x must be positive")
    return float(_sweep(G, [x], sources)[0])


def _sweep(G: Multigraph, xs: Sequence[float], sources) -> np.ndarray:
    _check_connected(G)
    vol_all = int(G.degrees.sum())
    lo, hi = zip(*(_window(x, vol_all) for x in xs)) if xs else ((), ())
    src = np.arange(G.n) if sources is None else np.asarray(list(sources), dtype=np.int64)
    indptr, indices = G.csr
    return _kernels.sweep_min_cond(indptr, indices, src, np.asarray(lo, float), np.asarray(hi, float))


def cond_profile_enumerated(G: Multigraph, xs: Sequence[float],
                            max_sets: int = DEFAULT_MAX_SETS) -> list[float]:
    """Exact profile values at each ``x`` by listing connected sets.

    Every connected set of volume at most ``max(window upper ends)`` is
    visited once (extension-set enumeration seeded at its least vertex), so
    the cost depends on how many such sets exist rather than on ``n``.
    Raises :class:`ProfileTooLarge` after ``max_sets`` sets.
    """
    _check_connected(G)
    vol_all = int(G.degrees.sum())
    windows = [_window(x, vol_all) for x in xs]
    if not windows:
        return []
    cap = max(hi for _, hi in windows)
    deg = G.degrees.tolist()
    indptr, indices = G.csr
    nbr: list[dict[int, int]] = []
    for v in range(G.n):
        row: dict[int, int] = {}
        for w in indices[indptr[v]:indptr[v + 1]].tolist():
            row[w] = row.get(w, 0) + 1
        nbr.append(row)
    best = [math.inf] * len(windows)
    visited = 0
    for root in range(G.n):
        if deg[root] > cap:
            continue
        first = [u for u in nbr[root] if u > root]
        # frame: members, pending extension vertices, volume, boundary, members plus neighbours
        stack = [({root}, first, deg[root], deg[root] - nbr[root].get(root, 0), set(first) | {root})]
        fresh = True
        while stack:
            sub, ext, d, out, seen = stack[-1]
            if fresh:
                visited += 1
                if visited > max_sets:
                    raise ProfileTooLarge(f"more than {max_sets} connected sets")
                for k, (lo, hi) in enumerate(windows):
                    if lo <= d <= hi and out / d < best[k]:
                        best[k] = out / d
            if not ext:
                stack.pop()
                fresh = False
                continue
            w = ext.pop()
            dw = deg[w]
            if d + dw > cap:
                fresh = False
                continue
            row = nbr[w]
            links = sum(c for u, c in row.items() if u in sub)
            new = [u for u in row if u > root and u not in seen]
            stack.append((sub | {w}, ext + new, d + dw, out + dw - 2 * links - row.get(w, 0),
                          seen.union(new)))
            fresh = True
    return best


def conductance_profile(G: Multigraph, exact_cutoff: int = DEFAULT_COND_CUTOFF,
                        sources: Iterable[int] | None = None,
                        max_sets: int | None = None) -> list[ProfilePoint]:
    """Profile values at ``x = 2^j`` for every level in :func:`dyadic_levels`.

    Exact when ``G.n <= exact_cutoff`` (all vertex subsets).  Above the
    cutoff, a positive ``max_sets`` asks for exact connected-set enumeration
    within that budget; otherwise, or when the budget runs out, the values
    are BFS-sweep upper bounds.
    """
    levels = dyadic_levels(G)
    xs = [2 ** j for j in levels]
    if G.n <= exact_cutoff:
        vals = [cond_profile_exact(G, x, cutoff=exact_cutoff) for x in xs]
        return [ProfilePoint(j, x, v, True) for j, x, v in zip(levels, xs, vals)]
    if max_sets:
        try:
            vals = cond_profile_enumerated(G, xs, max_sets)
            return [ProfilePoint(j, x, v, True) for j, x, v in zip(levels, xs, vals)]
        except ProfileTooLarge:
            pass
    vals = _sweep(G, xs, sources).tolist()
    return [ProfilePoint(j, x, v, False) for j, x, v in zip(levels, xs, vals)]
