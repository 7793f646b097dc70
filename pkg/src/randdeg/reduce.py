"""Homeomorphic and coloured reductions, core, kernel and decorations.

The homeomorphic reduction ``J(G)`` deletes the cycle components and then
replaces every maximal path whose internal vertices have degree 2 by one
edge between its ends.  Each edge of ``J`` here keeps the ordered list of
the internal vertices it replaced, so the reduction is lossless.  Edge
colours: red with no internal vertex, yellow with one, green with two or
more.  The *length* of an edge is the number of edges on its path.

The core is what survives repeatedly deleting vertices of degree at most 1;
the kernel is the homeomorphic reduction of the core.  Everything outside
the core is a forest whose trees (decorations) either hang from a single
core vertex by a single edge or are whole components.
"""
from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

import numpy as np

from .graph import GraphError, Multigraph, components

__all__ = [
    "RED",
    "YELLOW",
    "GREEN",
    "ReductionError",
    "ReducedEdge",
    "ColouredReduction",
    "coloured_reduction",
    "reconstruct",
    "Decoration",
    "DecoratedPath",
    "UnicyclicComponent",
    "KernelDecomposition",
    "core_vertices",
    "core_and_kernel",
    "reassemble",
    "ColourHistogram",
    "colour_histogram",
    "multicycle_component_count",
]

RED, YELLOW, GREEN = "red", "yellow", "green"


class ReductionError(GraphError):
    """A reduction record is internally inconsistent."""


def colour_for(internal_count: int) -> str:
    if internal_count == 0:
        return RED
    return YELLOW if internal_count == 1 else GREEN


@dataclass(frozen=True)
class ReducedEdge:
    u: int
    v: int
    internal: tuple[int, ...]
    colour: str

    @property
    def length(self) -> int:
        return len(self.internal) + 1

    @property
    def is_loop(self) -> bool:
        return self.u == self.v

    def path(self) -> tuple[int, ...]:
        return (self.u, *self.internal, self.v)


@dataclass(frozen=True)
class ColouredReduction:
    """``J`` on the original labels plus the stripped cycle components.

    ``vertices`` are the ``J`` vertices (degree other than 2, outside cycle
    components) and ``cycles`` list each cycle component in cyclic order.
    """

    n: int
    vertices: tuple[int, ...]
    edges: tuple[ReducedEdge, ...]
    cycles: tuple[tuple[int, ...], ...]

    @property
    def cyc(self) -> int:
        return sum(len(c) for c in self.cycles)

    def degree_sequence(self) -> list[int]:
        deg = Counter()
        for e in self.edges:
            deg[e.u] += 1
            deg[e.v] += 1
        return sorted(deg[v] for v in self.vertices)

    def as_multigraph(self) -> tuple[Multigraph, np.ndarray]:
        """Uncoloured ``J`` relabelled ``0..k-1``, with the original labels."""
        labels = np.asarray(self.vertices, dtype=np.int64)
        index = {v: i for i, v in enumerate(self.vertices)}
        return Multigraph.from_edges(len(labels), [(index[e.u], index[e.v]) for e in self.edges]), labels


def _adjacency(G: Multigraph) -> list[list[int]]:
    indptr, indices = G.csr
    flat = indices.tolist()
    ptr = indptr.tolist()
    return [flat[ptr[v]:ptr[v + 1]] for v in range(G.n)]


def _require_simple(G: Multigraph):
    if not G.is_simple:
        raise GraphError("reductions are defined for simple graphs")


def _reduce(n: int, members: Iterable[int], adj: list[list[int]]) -> ColouredReduction:
    """Reduction of the subgraph induced by ``members`` (``adj`` restricted to it)."""
    members = sorted(members)
    deg = {v: len(adj[v]) for v in members}
    seen = set()
    cycles = []
    for s in members:
        if s in seen or deg[s] != 2:
            continue
        # is the component of s 2-regular?
        comp = [s]
        seen_local = {s}
        queue = deque([s])
        regular = True
        while queue:
            u = queue.popleft()
            if deg[u] != 2:
                regular = False
            for w in adj[u]:
                if w not in seen_local:
                    seen_local.add(w)
                    comp.append(w)
                    queue.append(w)
        seen |= seen_local
        if not regular:
            continue
        start = min(comp)
        order = [start]
        prev, cur = start, min(adj[start])
        while cur != start:
            order.append(cur)
            a, b = adj[cur]
            prev, cur = cur, (b if a == prev else a)
        cycles.append(tuple(order))
    in_cycle = {v for c in cycles for v in c}
    vertices = tuple(v for v in members if v not in in_cycle and deg[v] != 2)
    used = set()
    edges = []
    for u in vertices:
        for w in adj[u]:
            if (u, w) in used:
                continue
            internal = []
            prev, cur = u, w
            while deg[cur] == 2:
                internal.append(cur)
                a, b = adj[cur]
                prev, cur = cur, (b if a == prev else a)
            used.add((u, w))
            used.add((cur, prev))
            edges.append(ReducedEdge(u, cur, tuple(internal), colour_for(len(internal))))
    return ColouredReduction(n, vertices, tuple(edges), tuple(cycles))


def coloured_reduction(G: Multigraph) -> ColouredReduction:
    """Coloured homeomorphic reduction of a simple graph."""
    _require_simple(G)
    return _reduce(G.n, range(G.n), _adjacency(G))


def _check_reduction(R: ColouredReduction):
    placed = Counter()
    red_pairs = set()
    for e in R.edges:
        expect = colour_for(len(e.internal))
        if e.colour != expect:
            raise ReductionError(f"edge {e.u}-{e.v} with {len(e.internal)} internal vertices "
                                 f"coloured {e.colour}, expected {expect}")
        if e.is_loop and e.colour != GREEN:
            raise ReductionError(f"{e.colour} loop at {e.u}")
        if e.colour == RED:
            key = (min(e.u, e.v), max(e.u, e.v))
            if key in red_pairs:
                raise ReductionError(f"parallel red edges {key}")
            red_pairs.add(key)
        placed.update(e.internal)
    for c in R.cycles:
        if len(c) < 3:
            raise ReductionError("cycle component shorter than 3")
        placed.update(c)
    placed.update(R.vertices)
    if any(k > 1 for k in placed.values()):
        raise ReductionError("a vertex is placed more than once")
    if set(placed) != set(range(R.n)):
        raise ReductionError("reduction does not account for every vertex exactly once")
    vset = set(R.vertices)
    for e in R.edges:
        if e.u not in vset or e.v not in vset:
            raise ReductionError(f"edge {e.u}-{e.v} ends outside the reduced vertex set")


def _path_edges(R: ColouredReduction) -> list[tuple[int, int]]:
    out = []
    for e in R.edges:
        p = e.path()
        out.extend(zip(p[:-1], p[1:]))
    for c in R.cycles:
        out.extend(zip(c, c[1:] + c[:1]))
    return out


def reconstruct(R: ColouredReduction) -> Multigraph:
    """Inverse of :func:`coloured_reduction`."""
    _check_reduction(R)
    G = Multigraph.from_edges(R.n, _path_edges(R))
    if not G.is_simple:
        raise ReductionError("reconstructed graph is not simple")
    return G


# ---------------------------------------------------------------- core / kernel


def core_vertices(G: Multigraph) -> set[int]:
    """Vertices of the maximal subgraph of minimum degree 2."""
    adj = _adjacency(G)
    deg = [len(a) for a in adj]
    alive = [True] * G.n
    queue = deque(v for v in range(G.n) if deg[v] <= 1)
    for v in queue:
        alive[v] = False
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if alive[w]:
                deg[w] -= 1
                if deg[w] <= 1:
                    alive[w] = False
                    queue.append(w)
    return {v for v in range(G.n) if alive[v]}


@dataclass(frozen=True)
class Decoration:
    """Tree outside the core; ``attach`` is its core neighbour or ``None``
    when the tree is a whole component."""

    attach: int | None
    root: int
    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]


class DecoratedPath(NamedTuple):
    edge: int                   # index into the kernel's edges
    decorations: tuple[int, ...]  # indices of decorations on interior vertices


class UnicyclicComponent(NamedTuple):
    cycle: tuple[int, ...]
    decorations: tuple[int, ...]


@dataclass(frozen=True)
class KernelDecomposition:
    n: int
    core: frozenset[int]
    kernel: ColouredReduction
    decorations: tuple[Decoration, ...]
    decorated_paths: tuple[DecoratedPath, ...]
    kernel_decorations: tuple[int, ...]
    unicyclic: tuple[UnicyclicComponent, ...]
    acyclic: tuple[Decoration, ...]
    _attached: dict = field(default_factory=dict, repr=False, compare=False)

    def kernel_multigraph(self) -> tuple[Multigraph, np.ndarray]:
        return self.kernel.as_multigraph()

    @property
    def kernel_nonempty(self) -> bool:
        return bool(self.kernel.vertices)


def core_and_kernel(G: Multigraph) -> KernelDecomposition:
    """Core, kernel, decorations, decorated paths and the acyclic/unicyclic
    components of a simple graph, enough to rebuild it exactly."""
    _require_simple(G)
    adj = _adjacency(G)
    core = core_vertices(G)
    core_adj = [[w for w in adj[v] if w in core] if v in core else [] for v in range(G.n)]
    kernel = _reduce(G.n, core, core_adj)

    decorations = []
    acyclic = []
    attached: dict[int, list[int]] = {}
    seen = set(core)
    for s in range(G.n):
        if s in seen:
            continue
        verts = [s]
        seen.add(s)
        tree_edges = []
        hook = None
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if w in core:
                    if hook is not None:
                        raise AssertionError("tree outside the core touches it twice")
                    hook = (w, u)
                elif w not in seen:
                    seen.add(w)
                    verts.append(w)
                    tree_edges.append((u, w))
                    queue.append(w)
        verts_t = tuple(sorted(verts))
        if hook is None:
            acyclic.append(Decoration(None, verts_t[0], verts_t, tuple(tree_edges)))
        else:
            attached.setdefault(hook[0], []).append(len(decorations))
            decorations.append(Decoration(hook[0], hook[1], verts_t, tuple(tree_edges)))

    paths = tuple(
        DecoratedPath(i, tuple(d for v in e.internal for d in attached.get(v, ())))
        for i, e in enumerate(kernel.edges)
    )
    kernel_decs = tuple(d for v in kernel.vertices for d in attached.get(v, ()))
    unicyclic = tuple(
        UnicyclicComponent(c, tuple(d for v in c for d in attached.get(v, ())))
        for c in kernel.cycles
    )
    return KernelDecomposition(G.n, frozenset(core), kernel, tuple(decorations), paths,
                               kernel_decs, unicyclic, tuple(acyclic), attached)


def reassemble(K: KernelDecomposition) -> Multigraph:
    """Rebuild the graph from a :class:`KernelDecomposition`."""
    edges = _path_edges(K.kernel)
    for d in K.decorations:
        edges.append((d.attach, d.root))
        edges.extend(d.edges)
    for d in K.acyclic:
        edges.extend(d.edges)
    return Multigraph.from_edges(K.n, edges)


# ---------------------------------------------------------------- statistics


class ColourHistogram(NamedTuple):
    r: int
    y: int
    g: int
    green_lengths: dict[int, int]   # length (edges) -> count

    @property
    def g3(self) -> int:
        return self.green_lengths.get(3, 0)

    def g_i(self, i: int) -> int:
        return self.green_lengths.get(i, 0)


def colour_histogram(R: ColouredReduction) -> ColourHistogram:
    counts = Counter(e.colour for e in R.edges)
    lengths = Counter(e.length for e in R.edges if e.colour == GREEN)
    return ColourHistogram(counts[RED], counts[YELLOW], counts[GREEN], dict(sorted(lengths.items())))


def multicycle_component_count(G: Multigraph) -> int:
    """Components with at least two independent cycles (edges >= vertices + 1)."""
    count = 0
    deg = G.degrees
    for part in components(G):
        if int(deg[part].sum()) // 2 >= len(part) + 1:
            count += 1
    return count
