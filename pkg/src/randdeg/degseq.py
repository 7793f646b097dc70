"""Degree sequences: parsing, feasibility, criticality statistics, families."""
from __future__ import annotations

import json
import math
import re
from collections import Counter
from dataclasses import dataclass, field
from itertools import accumulate
from typing import Iterable, Mapping

__all__ = [
    "DegreeSequenceError",
    "DegreeSequence",
    "CriticalStats",
    "parse_degree_sequence",
    "is_feasible",
    "critical_stats",
    "gen_family",
    "FAMILIES",
]

DEFAULT_RHO = 0.05
DEFAULT_MU = 0.05


class DegreeSequenceError(ValueError):
    """Malformed or unusable degree sequence."""


@dataclass(frozen=True)
class DegreeSequence:
    """Non-decreasing sequence of positive degrees with an even sum.

    Zeros are stripped on construction.  Vertex ``i`` (0-based) of any graph
    built from this sequence has degree ``degrees[i]``.
    """

    degrees: tuple[int, ...]
    counts: Mapping[int, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        degs = []
        for d in self.degrees:
            if isinstance(d, bool) or int(d) != d:
                raise DegreeSequenceError(f"degree {d!r} is not an integer")
            if d < 0:
                raise DegreeSequenceError(f"negative degree {d}")
            if d:
                degs.append(int(d))
        degs.sort()
        if sum(degs) % 2:
            raise DegreeSequenceError("degree sum is odd")
        object.__setattr__(self, "degrees", tuple(degs))
        object.__setattr__(self, "counts", dict(Counter(degs)))

    @classmethod
    def of(cls, degrees: Iterable[int]) -> "DegreeSequence":
        return cls(tuple(degrees))

    def __len__(self):
        return len(self.degrees)

    def __iter__(self):
        return iter(self.degrees)

    @property
    def n(self) -> int:
        return len(self.degrees)

    @property
    def m(self) -> int:
        return sum(self.degrees) // 2

    def n_d(self, d: int) -> int:
        """Number of vertices of degree ``d``."""
        return self.counts.get(d, 0)

    @property
    def n2(self) -> int:
        return self.n_d(2)

    @property
    def m_ne2(self) -> int:
        """Edges minus degree-2 vertices: the edge count of the reduced multigraph."""
        return self.m - self.n2

    @property
    def max_degree(self) -> int:
        return self.degrees[-1] if self.degrees else 0

    def to_json(self) -> list[int]:
        return list(self.degrees)


def parse_degree_sequence(text: str) -> DegreeSequence:
    """Parse a JSON array or comma/whitespace/newline separated integers.

    >>> parse_degree_sequence("0,0,2,2,2").degrees
    (2, 2, 2)
    """
    stripped = text.strip()
    if stripped.startswith("["):
        try:
            values = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise DegreeSequenceError(f"bad JSON degree list: {exc}") from None
        if not isinstance(values, list):
            raise DegreeSequenceError("JSON degree sequence must be an array")
        tokens = values
    else:
        lines = [ln.split("#", 1)[0] for ln in stripped.splitlines()]
        tokens = [t for t in re.split(r"[,\s]+", " ".join(lines)) if t]
    if not tokens:
        raise DegreeSequenceError("no degrees given")
    degrees = []
    for tok in tokens:
        if isinstance(tok, int) and not isinstance(tok, bool):
            degrees.append(tok)
            continue
        try:
            degrees.append(int(str(tok)))
        except ValueError:
            raise DegreeSequenceError(f"non-integer token {tok!r}") from None
    return DegreeSequence(tuple(degrees))


def is_feasible(D: DegreeSequence | Iterable[int]) -> bool:
    """Erdős–Gallai test for a simple-graph realisation.

    For the sequence sorted non-increasingly, every prefix ``k`` must satisfy
    ``sum_{i<=k} d_i <= k(k-1) + sum_{i>k} min(d_i, k)``.
    """
    degs = sorted((D.degrees if isinstance(D, DegreeSequence) else D), reverse=True)
    if any(d < 0 for d in degs) or sum(degs) % 2:
        return False
    n = len(degs)
    if n and degs[0] > n - 1:
        return False
    prefix = list(accumulate(degs))
    # tail sums of min(d_i, k) via a pointer over the non-increasing list
    suffix = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] + degs[i]
    j = n  # first index with degs[j] < k  (for increasing k this only moves left)
    for k in range(1, n + 1):
        while j > 0 and degs[j - 1] < k:
            j -= 1
        # indices k..n-1: those < j have d_i >= k, those >= j contribute d_i
        lo = max(j, k)
        tail = k * max(0, j - k) + suffix[lo]
        if prefix[k - 1] > k * (k - 1) + tail:
            return False
    return True


@dataclass(frozen=True)
class CriticalStats:
    """Giant-component statistics of a degree sequence.

    ``j`` is 1-indexed as in the usual statement of the criterion.
    """

    j: int
    R: int
    m: int
    m_ne2: int
    rho: float
    mu: float
    supercritical: bool
    degenerate: bool
    mu_center: bool
    top_mass: int

    def to_json(self) -> dict:
        return {
            "j_D": self.j,
            "R_D": self.R,
            "m": self.m,
            "m_ne2": self.m_ne2,
            "rho": self.rho,
            "mu": self.mu,
            "supercritical": self.supercritical,
            "degenerate": self.degenerate,
            "mu_center": self.mu_center,
            "top_mass": self.top_mass,
        }


def critical_stats(D: DegreeSequence, rho: float = DEFAULT_RHO, mu: float = DEFAULT_MU,
                   min_m_ne2: int = 1) -> CriticalStats:
    """Compute ``j_D``, ``R_D`` and the supercritical / mu-center flags.

    ``supercritical`` requires ``m_ne2 >= min_m_ne2`` (the caller's notion of
    "large") and ``R_D >= rho * m_ne2``.  A sequence with ``m_ne2 == 0`` is
    reported with ``degenerate=True`` and never supercritical.
    """
    if not 0 < rho < 1 or not 0 < mu < 1:
        raise ValueError("rho and mu must lie in (0, 1)")
    degs = D.degrees
    n = len(degs)
    if n == 0:
        raise DegreeSequenceError("empty degree sequence")
    j = n
    run = 0
    for i, d in enumerate(degs, start=1):
        run += d * (d - 2)
        if run > 0:
            j = i
            break
    R = sum(degs[j - 1:])
    m_ne2 = D.m_ne2
    degenerate = m_ne2 == 0
    supercritical = (not degenerate) and m_ne2 >= min_m_ne2 and R >= rho * m_ne2
    dn = degs[-1]
    top_mass = sum(degs[max(0, n - dn):])
    mu_center = (not degenerate) and top_mass >= mu ** 2 * m_ne2 and m_ne2 >= mu ** 3 * D.m
    return CriticalStats(j=j, R=R, m=D.m, m_ne2=m_ne2, rho=rho, mu=mu,
                         supercritical=supercritical, degenerate=degenerate,
                         mu_center=mu_center, top_mass=top_mass)


# ---------------------------------------------------------------- families


def _icbrt(x: int) -> int:
    """Floor of the real cube root of a non-negative integer."""
    r = int(round(x ** (1.0 / 3.0)))
    while r ** 3 > x:
        r -= 1
    while (r + 1) ** 3 <= x:
        r += 1
    return r


def _floor_cbrt_over(x: int, a: float) -> int:
    """``floor(x ** (1/3) / a)`` without trusting floating cube roots."""
    q = int(math.floor(x ** (1.0 / 3.0) / a))
    while q > 0 and (q * a) ** 3 > x:
        q -= 1
    while ((q + 1) * a) ** 3 <= x:
        q += 1
    return q


def _path_heavy(p):
    n = int(p["n"])
    if "f" in p:
        f = math.ceil(float(p["f"]))
    else:
        f = math.ceil(n ** float(p.get("f_exp", 0.5)))
    if 2 * f > n:
        raise DegreeSequenceError("path-heavy needs 2*ceil(f) <= n")
    return [f] * (2 * f) + [2] * (n - 2 * f)


def _three_regular_leaves(p):
    k = int(p["k"])
    return [3] * (2 * k) + [1] * k


def _two_stars(p):
    n = int(p["n"])
    if n % 2:
        raise DegreeSequenceError("two-stars needs an even n")
    return [n // 2, n // 2] + [1] * (n - 2)


def _clique_leaves(p):
    n, D = int(p["n"]), int(p["D"])
    if D < 1 or n % D:
        raise DegreeSequenceError("clique-leaves needs D dividing n")
    return [n // D + D - 2] * D + [1] * (n - D)


def _star_separation(p):
    ell = int(p["l"] if "l" in p else p["ell"])
    rho = float(p.get("rho", 0.02))
    a = float(p.get("a", 15))
    hub = math.ceil(2 * rho * ell)
    h = _icbrt(ell)
    dh = _floor_cbrt_over(ell, a)
    rest = ell - 1 - h
    if rest < 0:
        raise DegreeSequenceError("star-separation needs l > floor(l^(1/3)) + 1")
    return [hub] + [dh] * h + [1] * rest


def _regular(p):
    return [int(p["d"])] * int(p["n"])


def _subcritical_paths(p):
    n = int(p["n"])
    n1 = int(p.get("n1", n // 2))
    if not 0 <= n1 <= n:
        raise DegreeSequenceError("subcritical-paths needs 0 <= n1 <= n")
    return [1] * n1 + [2] * (n - n1)


FAMILIES = {
    "path-heavy": _path_heavy,
    "three-regular-leaves": _three_regular_leaves,
    "two-stars": _two_stars,
    "clique-leaves": _clique_leaves,
    "star-separation": _star_separation,
    "regular": _regular,
    "subcritical-paths": _subcritical_paths,
}


def gen_family(name: str, params: Mapping[str, float] | None = None, **kwargs) -> DegreeSequence:
    """Degree sequence of a named example family.

    Families and their parameters:

    ``path-heavy`` (n, f or f_exp)
        ``2*ceil(f)`` vertices of degree ``ceil(f)``, the rest degree 2;
        ``f = n ** f_exp`` when ``f`` is not given.
    ``three-regular-leaves`` (k)
        ``2k`` vertices of degree 3 and ``k`` of degree 1.
    ``two-stars`` (n, even)
        two vertices of degree ``n/2``, the rest leaves.
    ``clique-leaves`` (n, D with D | n)
        ``D`` vertices of degree ``n/D + D - 2``, the rest leaves.
    ``star-separation`` (l, rho=0.02, a=15)
        one vertex of degree ``ceil(2 rho l)``, ``floor(l^(1/3))`` of degree
        ``floor(l^(1/3)/a)``, the rest leaves.
    ``regular`` (n, d)
    ``subcritical-paths`` (n, n1=n//2)
        ``n1`` leaves and ``n - n1`` vertices of degree 2.

    An odd raw degree sum is repaired by raising one minimum-degree entry
    by one.
    """
    if name not in FAMILIES:
        raise DegreeSequenceError(f"unknown family {name!r}; choose from {sorted(FAMILIES)}")
    p = dict(params or {})
    p.update(kwargs)
    try:
        raw = FAMILIES[name](p)
    except KeyError as exc:
        raise DegreeSequenceError(f"family {name!r} is missing parameter {exc.args[0]!r}") from None
    raw = sorted(d for d in raw if d > 0)
    if len(raw) < 4:
        raise DegreeSequenceError(f"family {name!r} with {p} has fewer than 4 vertices")
    if sum(raw) % 2:
        raw[0] += 1
    D = DegreeSequence(tuple(raw))
    if not is_feasible(D):
        raise DegreeSequenceError(f"family {name!r} with {p} is not graphical")
    return D
