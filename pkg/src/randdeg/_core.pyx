# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels; same names, signatures and results as ``_pycore``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, INFINITY
from libcpp.unordered_set cimport unordered_set
from libcpp.vector cimport vector

cnp.import_array()

ctypedef long long i64

MAX_SUBSET_VERTICES = 22


cdef inline i64 _key(i64 u, i64 v, i64 n) nogil:
    return u * n + v if u < v else v * n + u


cdef class SwitchChain:
    cdef public i64 n
    cdef vector[i64] _eu
    cdef vector[i64] _ev
    cdef unordered_set[i64] _keys

    def __init__(self, n, eu, ev):
        cdef i64 u, v, key
        self.n = int(n)
        eu = np.asarray(eu, dtype=np.int64)
        ev = np.asarray(ev, dtype=np.int64)
        if len(eu) != len(ev):
            raise ValueError("endpoint arrays differ in length")
        self._keys.reserve(2 * len(eu) + 1)
        for u, v in zip(eu.tolist(), ev.tolist()):
            if u == v:
                raise ValueError("switch chain requires a loop-free graph")
            key = _key(u, v, self.n)
            if self._keys.count(key):
                raise ValueError("switch chain requires a graph without parallel edges")
            self._keys.insert(key)
            self._eu.push_back(u)
            self._ev.push_back(v)

    @property
    def m(self):
        return self._eu.size()

    def run(self, e1, e2, flips):
        cdef const i64[::1] E1 = np.ascontiguousarray(e1, dtype=np.int64)
        cdef const i64[::1] E2 = np.ascontiguousarray(e2, dtype=np.int64)
        cdef const cnp.uint8_t[::1] F = np.ascontiguousarray(flips, dtype=np.uint8)
        cdef Py_ssize_t k, K = E1.shape[0]
        cdef i64 i, j, a, b, x, y, kxb, kay, n = self.n
        cdef int f
        cdef i64 accepted = 0
        with nogil:
            for k in range(K):
                i = E1[k]
                j = E2[k]
                if i == j:
                    continue
                f = F[k]
                if f & 1:
                    a = self._ev[i]; b = self._eu[i]
                else:
                    a = self._eu[i]; b = self._ev[i]
                if f & 2:
                    x = self._ev[j]; y = self._eu[j]
                else:
                    x = self._eu[j]; y = self._ev[j]
                if b == x or a == y:
                    continue
                kxb = _key(x, b, n)
                if self._keys.count(kxb):
                    continue
                kay = _key(a, y, n)
                if self._keys.count(kay):
                    continue
                self._keys.erase(_key(a, b, n))
                self._keys.erase(_key(x, y, n))
                self._keys.insert(kxb)
                self._keys.insert(kay)
                self._eu[i] = x; self._ev[i] = b
                self._eu[j] = a; self._ev[j] = y
                accepted += 1
        return accepted

    def edges(self):
        cdef Py_ssize_t m = self._eu.size()
        eu = np.empty(m, dtype=np.int64)
        ev = np.empty(m, dtype=np.int64)
        cdef i64[::1] U = eu
        cdef i64[::1] V = ev
        cdef Py_ssize_t i
        for i in range(m):
            U[i] = self._eu[i]
            V[i] = self._ev[i]
        return eu, ev


def mixing_steps(indptr, indices, starts, t_max, threshold):
    cdef const i64[::1] P = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef const i64[::1] I = np.ascontiguousarray(indices, dtype=np.int64)
    cdef const i64[::1] S = np.ascontiguousarray(starts, dtype=np.int64)
    cdef Py_ssize_t n = P.shape[0] - 1
    cdef Py_ssize_t k = S.shape[0]
    result = np.full(k, -1, dtype=np.int64)
    cdef i64[::1] R = result
    if k == 0:
        return result
    deg_arr = np.diff(np.asarray(P)).astype(np.float64)
    pi_arr = deg_arr / deg_arr.sum()
    half_inv = 0.5 / deg_arr
    cdef const double[::1] pi = pi_arr
    cdef const double[::1] w = half_inv
    cdef double[::1] cur = np.zeros(n)
    cdef double[::1] nxt = np.zeros(n)
    cdef double[::1] tmp
    cdef double thr = threshold, tv, c
    cdef i64 tmax = t_max, t
    cdef Py_ssize_t s, v, p
    with nogil:
        for s in range(k):
            for v in range(n):
                cur[v] = 0.0
            cur[S[s]] = 1.0
            t = 0
            while True:
                tv = 0.0
                for v in range(n):
                    tv += fabs(cur[v] - pi[v])
                tv *= 0.5
                if tv < thr:
                    R[s] = t
                    break
                if t >= tmax:
                    break
                for v in range(n):
                    nxt[v] = 0.5 * cur[v]
                for v in range(n):
                    c = cur[v]
                    if c != 0.0:
                        c *= w[v]
                        for p in range(P[v], P[v + 1]):
                            nxt[I[p]] += c
                tmp = cur
                cur = nxt
                nxt = tmp
                t += 1
    return result


def eccentricities(indptr, indices, sources):
    cdef const i64[::1] P = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef const i64[::1] I = np.ascontiguousarray(indices, dtype=np.int64)
    cdef const i64[::1] S = np.ascontiguousarray(sources, dtype=np.int64)
    cdef Py_ssize_t n = P.shape[0] - 1
    cdef Py_ssize_t k = S.shape[0]
    ecc = np.zeros(k, dtype=np.int64)
    reached = np.zeros(k, dtype=np.int64)
    cdef i64[::1] E = ecc
    cdef i64[::1] C = reached
    cdef i64[::1] dist = np.full(n, -1, dtype=np.int64)
    cdef i64[::1] queue = np.zeros(max(n, 1), dtype=np.int64)
    cdef Py_ssize_t s, v, head, tail, p
    cdef i64 u, wv, du, far
    with nogil:
        for s in range(k):
            for v in range(n):
                dist[v] = -1
            u = S[s]
            dist[u] = 0
            queue[0] = u
            head = 0
            tail = 1
            far = 0
            while head < tail:
                u = queue[head]
                head += 1
                du = dist[u] + 1
                for p in range(P[u], P[u + 1]):
                    wv = I[p]
                    if dist[wv] < 0:
                        dist[wv] = du
                        far = du
                        queue[tail] = wv
                        tail += 1
            E[s] = far
            C[s] = tail
    return ecc, reached


cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil


cdef inline int _lowbit(unsigned long long x) nogil:
    return __builtin_ctzll(x)


def connected_subset_stats(mult):
    M = np.ascontiguousarray(mult, dtype=np.int64)
    cdef Py_ssize_t n = M.shape[0]
    if n > MAX_SUBSET_VERTICES:
        raise ValueError(f"subset enumeration limited to {MAX_SUBSET_VERTICES} vertices")
    cdef const i64[:, ::1] A = M
    deg_arr = M.sum(axis=1)
    cdef const i64[::1] deg = deg_arr
    nbr_arr = np.zeros(n, dtype=np.uint64)
    cdef cnp.uint64_t[::1] nbr = nbr_arr
    cdef Py_ssize_t v, w
    for v in range(n):
        for w in range(n):
            if w != v and A[v, w]:
                nbr[v] |= (<cnp.uint64_t>1) << w
    cdef Py_ssize_t size = (<Py_ssize_t>1) << n
    vol_arr = np.zeros(size, dtype=np.int64)
    int_arr = np.zeros(size, dtype=np.int64)
    keep_arr = np.zeros(size, dtype=np.uint8)
    cdef i64[::1] vol = vol_arr
    cdef i64[::1] internal = int_arr
    cdef cnp.uint8_t[::1] keep = keep_arr
    cdef cnp.uint64_t mask, rest, r, reach, frontier, grow, f
    cdef int low, wi
    cdef i64 acc
    with nogil:
        for mask in range(1, <cnp.uint64_t>size):
            low = _lowbit(mask)
            rest = mask & (mask - 1)
            vol[mask] = vol[rest] + deg[low]
            acc = internal[rest] + A[low, low]
            r = rest
            while r:
                wi = _lowbit(r)
                acc += 2 * A[low, wi]
                r &= r - 1
            internal[mask] = acc
            reach = (<cnp.uint64_t>1) << low
            frontier = reach
            while frontier:
                grow = 0
                f = frontier
                while f:
                    wi = _lowbit(f)
                    grow |= nbr[wi]
                    f &= f - 1
                grow &= mask & ~reach
                reach |= grow
                frontier = grow
            if reach == mask:
                keep[mask] = 1
    masks = np.flatnonzero(keep_arr).astype(np.int64)
    vols = vol_arr[masks]
    outs = vols - int_arr[masks]
    return masks, vols, outs


def sweep_min_cond(indptr, indices, sources, lo, hi):
    cdef const i64[::1] P = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef const i64[::1] I = np.ascontiguousarray(indices, dtype=np.int64)
    cdef const i64[::1] S = np.ascontiguousarray(sources, dtype=np.int64)
    cdef const double[::1] LO = np.ascontiguousarray(lo, dtype=np.float64)
    cdef const double[::1] HI = np.ascontiguousarray(hi, dtype=np.float64)
    cdef Py_ssize_t K = LO.shape[0]
    cdef Py_ssize_t n = P.shape[0] - 1
    best_arr = np.full(K, np.inf)
    cdef double[::1] best = best_arr
    if K == 0:
        return best_arr
    cdef double vmax = max(np.asarray(HI))
    cdef i64[::1] stamp = np.full(n, -1, dtype=np.int64)
    cdef i64[::1] inset = np.full(n, -1, dtype=np.int64)
    cdef i64[::1] queue = np.zeros(max(n, 1), dtype=np.int64)
    cdef Py_ssize_t it, head, tail, p, kk
    cdef i64 s, v, wv, d, into, selfs, vol, out
    cdef double c
    with nogil:
        for it in range(S.shape[0]):
            s = S[it]
            stamp[s] = it
            queue[0] = s
            head = 0
            tail = 1
            vol = 0
            out = 0
            while head < tail:
                v = queue[head]
                head += 1
                d = P[v + 1] - P[v]
                into = 0
                selfs = 0
                for p in range(P[v], P[v + 1]):
                    wv = I[p]
                    if wv == v:
                        selfs += 1
                    elif inset[wv] == it:
                        into += 1
                    if stamp[wv] != it:
                        stamp[wv] = it
                        queue[tail] = wv
                        tail += 1
                inset[v] = it
                vol += d
                out += d - 2 * into - selfs
                if vol > vmax:
                    break
                if vol > 0:
                    c = (<double>out) / vol
                else:
                    c = INFINITY
                for kk in range(K):
                    if LO[kk] <= vol and vol <= HI[kk] and c < best[kk]:
                        best[kk] = c
    return best_arr
