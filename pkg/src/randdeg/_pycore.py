"""Pure-Python reference implementations of the hot kernels.

Every function here has a twin of the same name and signature in the
compiled ``_core`` extension.  Given the same inputs both produce the same
outputs; the random draws are always made by the caller, so a seeded run is
reproducible whichever backend is active.

Graphs are passed in CSR form: ``indices[indptr[v]:indptr[v + 1]]`` lists
the far endpoint of every half-edge owned by ``v``.  A loop at ``v`` puts
``v`` into its own row twice and a parallel edge repeats the neighbour.
"""
from collections import deque

import numpy as np
import scipy.sparse as sp

__all__ = [
    "SwitchChain",
    "mixing_steps",
    "eccentricities",
    "connected_subset_stats",
    "sweep_min_cond",
]

MAX_SUBSET_VERTICES = 22


class SwitchChain:
    """Edge-switching chain state over a simple graph.

    Parameters
    ----------
    n : int
        Number of vertices.
    eu, ev : array_like of int
        Endpoints of the ``m`` edges; copied.
    """

    def __init__(self, n, eu, ev):
        self.n = int(n)
        self._eu = [int(u) for u in eu]
        self._ev = [int(v) for v in ev]
        if len(self._eu) != len(self._ev):
            raise ValueError("endpoint arrays differ in length")
        n = self.n
        keys = set()
        for u, v in zip(self._eu, self._ev):
            if u == v:
                raise ValueError("switch chain requires a loop-free graph")
            key = u * n + v if u < v else v * n + u
            if key in keys:
                raise ValueError("switch chain requires a graph without parallel edges")
            keys.add(key)
        self._keys = keys

    @property
    def m(self):
        return len(self._eu)

    def run(self, e1, e2, flips):
        """Apply one proposal per entry; returns the number accepted.

        Proposal ``k`` takes edge ``e1[k]`` as ``(a, b)`` and edge ``e2[k]`` as
        ``(x, y)``, reversing the first when bit 0 of ``flips[k]`` is set and
        the second when bit 1 is set.  It is applied iff the switched graph
        ``E - {ab, xy} + {xb, ay}`` is still simple.
        """
        eu, ev, keys, n = self._eu, self._ev, self._keys, self.n
        accepted = 0
        for i, j, f in zip(e1.tolist(), e2.tolist(), flips.tolist()):
            if i == j:
                continue
            if f & 1:
                a, b = ev[i], eu[i]
            else:
                a, b = eu[i], ev[i]
            if f & 2:
                x, y = ev[j], eu[j]
            else:
                x, y = eu[j], ev[j]
            if b == x or a == y:
                continue
            kxb = x * n + b if x < b else b * n + x
            if kxb in keys:
                continue
            kay = a * n + y if a < y else y * n + a
            if kay in keys:
                continue
            keys.discard(a * n + b if a < b else b * n + a)
            keys.discard(x * n + y if x < y else y * n + x)
            keys.add(kxb)
            keys.add(kay)
            eu[i], ev[i] = x, b
            eu[j], ev[j] = a, y
            accepted += 1
        return accepted

    def edges(self):
        return (np.asarray(self._eu, dtype=np.int64),
                np.asarray(self._ev, dtype=np.int64))


def mixing_steps(indptr, indices, starts, t_max, threshold):
    """First ``t >= 0`` with ``TV(mu^{t,i}, pi) < threshold`` for each start.

    Entries are -1 where the walk has not mixed by ``t_max``.
    """
    indptr = np.asarray(indptr, dtype=np.int64)
    indices = np.asarray(indices, dtype=np.int64)
    n = len(indptr) - 1
    deg = np.diff(indptr).astype(np.float64)
    vol = deg.sum()
    starts = np.asarray(starts, dtype=np.int64)
    k = len(starts)
    out = np.full(k, -1, dtype=np.int64)
    if k == 0:
        return out
    pi = deg / vol
    rows = np.repeat(np.arange(n), np.diff(indptr))
    weights = 0.5 / deg[rows]
    # column-stochastic transpose of the lazy kernel: mu' = T @ mu
    T = sp.csr_matrix((weights, (indices, rows)), shape=(n, n))
    T = (T + sp.diags(np.full(n, 0.5))).tocsr()
    mu = np.zeros((n, k))
    mu[starts, np.arange(k)] = 1.0
    active = np.arange(k)
    t = 0
    while True:
        tv = 0.5 * np.abs(mu[:, active] - pi[:, None]).sum(axis=0)
        done = tv < threshold
        out[active[done]] = t
        active = active[~done]
        if len(active) == 0 or t >= t_max:
            break
        mu[:, active] = T @ mu[:, active]
        t += 1
    return out


def eccentricities(indptr, indices, sources):
    """BFS eccentricity of each source and the number of vertices it reaches."""
    indptr = np.asarray(indptr, dtype=np.int64).tolist()
    indices = np.asarray(indices, dtype=np.int64).tolist()
    n = len(indptr) - 1
    ecc = []
    reached = []
    dist = [-1] * n
    for s in np.asarray(sources, dtype=np.int64).tolist():
        for v in range(n):
            dist[v] = -1
        dist[s] = 0
        queue = deque([s])
        far = 0
        count = 1
        while queue:
            u = queue.popleft()
            du = dist[u] + 1
            for p in range(indptr[u], indptr[u + 1]):
                w = indices[p]
                if dist[w] < 0:
                    dist[w] = du
                    far = du
                    count += 1
                    queue.append(w)
        ecc.append(far)
        reached.append(count)
    return np.asarray(ecc, dtype=np.int64), np.asarray(reached, dtype=np.int64)


def connected_subset_stats(mult):
    """Volume and boundary size of every connected nonempty vertex subset.

    Parameters
    ----------
    mult : (n, n) int array
        ``mult[v, w]`` is the number of half-edges of ``v`` whose partner
        belongs to ``w`` (so a loop adds 2 on the diagonal).

    Returns
    -------
    masks, vol, out : int64 arrays
        One entry per connected subset, in increasing mask order.
    """
    mult = np.asarray(mult, dtype=np.int64)
    n = mult.shape[0]
    if n > MAX_SUBSET_VERTICES:
        raise ValueError(f"subset enumeration limited to {MAX_SUBSET_VERTICES} vertices")
    rows = mult.tolist()
    deg = [sum(r) for r in rows]
    nbr = [0] * n
    for v in range(n):
        for w in range(n):
            if w != v and rows[v][w]:
                nbr[v] |= 1 << w
    size = 1 << n
    vol = [0] * size
    internal = [0] * size
    masks, vols, outs = [], [], []
    for mask in range(1, size):
        low = (mask & -mask).bit_length() - 1
        rest = mask & (mask - 1)
        vol[mask] = vol[rest] + deg[low]
        row = rows[low]
        acc = internal[rest] + row[low]
        r = rest
        while r:
            w = (r & -r).bit_length() - 1
            acc += 2 * row[w]
            r &= r - 1
        internal[mask] = acc
        # grow the component of the lowest vertex inside the mask
        reach = 1 << low
        frontier = reach
        while frontier:
            grow = 0
            f = frontier
            while f:
                w = (f & -f).bit_length() - 1
                grow |= nbr[w]
                f &= f - 1
            grow &= mask & ~reach
            reach |= grow
            frontier = grow
        if reach == mask:
            masks.append(mask)
            vols.append(vol[mask])
            outs.append(vol[mask] - acc)
    return (np.asarray(masks, dtype=np.int64), np.asarray(vols, dtype=np.int64),
            np.asarray(outs, dtype=np.int64))


def sweep_min_cond(indptr, indices, sources, lo, hi):
    """Minimum ``out(S)/d(S)`` over BFS-order prefixes inside each volume window.

    Window ``k`` accepts prefixes with ``lo[k] <= d(S) <= hi[k]``; windows
    with no accepted prefix report ``inf``.
    """
    indptr = np.asarray(indptr, dtype=np.int64).tolist()
    indices = np.asarray(indices, dtype=np.int64).tolist()
    lo = np.asarray(lo, dtype=np.float64).tolist()
    hi = np.asarray(hi, dtype=np.float64).tolist()
    K = len(lo)
    best = [float("inf")] * K
    n = len(indptr) - 1
    if K == 0:
        return np.asarray(best)
    vmax = max(hi)
    stamp = [-1] * n   # BFS discovery
    inset = [-1] * n   # membership of the current prefix
    for it, s in enumerate(np.asarray(sources, dtype=np.int64).tolist()):
        stamp[s] = it
        queue = deque([s])
        vol = 0
        out = 0
        while queue:
            v = queue.popleft()
            d = indptr[v + 1] - indptr[v]
            into = 0
            selfs = 0
            for p in range(indptr[v], indptr[v + 1]):
                w = indices[p]
                if w == v:
                    selfs += 1
                elif inset[w] == it:
                    into += 1
                if stamp[w] != it:
                    stamp[w] = it
                    queue.append(w)
            inset[v] = it
            vol += d
            out += d - 2 * into - selfs
            if vol > vmax:
                break
            c = out / vol if vol else float("inf")
            for k in range(K):
                if lo[k] <= vol <= hi[k] and c < best[k]:
                    best[k] = c
    return np.asarray(best, dtype=np.float64)
