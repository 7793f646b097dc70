"""Lazy random walks on graph components: stationary law, total variation,
mixing times, conductance sums and the bounds relating them.

The walk stays put with probability 1/2 and otherwise follows a uniformly
chosen half-edge, so loops and parallel edges are weighted by multiplicity.
Mixing time is ``max_i min{t >= 0 : TV(mu^{t,i}, pi) < 1/e}``.  The
inequality is strict; a distance equal to ``1/e`` up to ``TIE_TOLERANCE``
counts as not yet mixed.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .graph import (
    DEFAULT_COND_CUTOFF,
    DEFAULT_MAX_SETS,
    GraphError,
    Multigraph,
    ProfilePoint,
    bfs_distances,
    component_subgraphs,
    components,
    conductance_profile,
    diameter,
)
from .reduce import core_vertices

__all__ = [
    "MIXING_THRESHOLD",
    "TIE_TOLERANCE",
    "DEFAULT_EXACT_CUTOFF",
    "MIXING_CONSTANT",
    "MixingError",
    "stationary",
    "lazy_step",
    "tv_distance",
    "tv_trajectory",
    "mixing_time_from",
    "mixing_time_exact",
    "mixing_time_sampled",
    "peripheral_starts",
    "mixing_time_estimate",
    "BoundCheck",
    "check_peres_bound",
    "check_diameter_conductance_bound",
    "check_mixing_conductance_bound",
    "WalkReport",
    "walk_report",
    "analyse_graph",
    "reports_to_csv",
    "reports_to_json",
]

MIXING_THRESHOLD = math.exp(-1.0)
TIE_TOLERANCE = 1e-12
DEFAULT_EXACT_CUTOFF = 400
NORMALISATION_TOLERANCE = 1e-9

# Largest tau / sum(cond^-2) on the calibration corpus: every connected graph
# on at most 6 vertices, paths, cycles, stars and cliques up to 16 vertices,
# the 40-vertex barbell and 300 random graphs on 7..14 vertices.  The maximum
# (attained by stars) is exactly 1.
MIXING_CONSTANT = 1.0


class MixingError(GraphError):
    """The walk failed to mix within the guard, or the input is unusable."""


def stationary(G: Multigraph) -> np.ndarray:
    """``deg(u) / 2|E|``."""
    if G.m == 0:
        raise MixingError("stationary law needs at least one edge")
    deg = G.degrees.astype(np.float64)
    return deg / deg.sum()


def lazy_step(G: Multigraph, mu: Sequence[float]) -> np.ndarray:
    """One step of the lazy walk applied to the distribution ``mu``."""
    mu = np.asarray(mu, dtype=np.float64)
    if mu.shape != (G.n,):
        raise MixingError(f"distribution has shape {mu.shape}, graph has {G.n} vertices")
    if (mu < -NORMALISATION_TOLERANCE).any() or abs(mu.sum() - 1.0) > NORMALISATION_TOLERANCE:
        raise MixingError("input is not a probability distribution")
    indptr, indices = G.csr
    deg = np.diff(indptr)
    share = np.divide(mu, deg, out=np.zeros_like(mu), where=deg > 0)
    rows = np.repeat(np.arange(G.n), deg)
    moved = np.bincount(indices, weights=share[rows], minlength=G.n)
    # an isolated vertex keeps all of its mass
    return np.where(deg > 0, 0.5 * mu, mu) + 0.5 * moved


def tv_distance(p: Sequence[float], q: Sequence[float]) -> float:
    """Total variation distance, half the L1 distance."""
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if p.shape != q.shape:
        raise ValueError(f"length mismatch: {p.shape} vs {q.shape}")
    return 0.5 * float(np.abs(p - q).sum())


def tv_trajectory(G: Multigraph, start: int, steps: int) -> np.ndarray:
    """``TV(mu^{t,start}, pi)`` for ``t = 0 .. steps``."""
    pi = stationary(G)
    mu = np.zeros(G.n)
    mu[start] = 1.0
    out = [tv_distance(mu, pi)]
    for _ in range(steps):
        mu = lazy_step(G, mu)
        out.append(tv_distance(mu, pi))
    return np.asarray(out)


def _guard(G: Multigraph, diam: int | None) -> int:
    if diam is None:
        diam = diameter(G)
    return 64 * G.m * max(diam, 1)


def _require_connected(G: Multigraph):
    if len(components(G)) != 1:
        raise MixingError("mixing times are defined per connected component")


def mixing_time_from(G: Multigraph, starts: Iterable[int], diam: int | None = None) -> int:
    """Largest per-start mixing step over ``starts`` on a connected graph."""
    if G.n == 1:
        return 0
    _require_connected(G)
    src = np.asarray(sorted(set(int(s) for s in starts)), dtype=np.int64)
    if len(src) == 0:
        raise ValueError("need at least one start")
    if src.min() < 0 or src.max() >= G.n:
        raise ValueError("start vertex out of range")
    t_max = _guard(G, diam)
    indptr, indices = G.csr
    steps = _kernels.mixing_steps(indptr, indices, src, t_max, MIXING_THRESHOLD - TIE_TOLERANCE)
    if (steps < 0).any():
        raise MixingError(f"walk did not mix within {t_max} steps")
    return int(steps.max())


def mixing_time_exact(G: Multigraph, cutoff: int = DEFAULT_EXACT_CUTOFF, diam: int | None = None) -> int:
    """Worst-start mixing time, evolving the walk from every vertex."""
    if G.n > cutoff:
        raise MixingError(f"component has {G.n} vertices, exact cutoff is {cutoff}")
    return mixing_time_from(G, range(G.n), diam)


def mixing_time_sampled(G: Multigraph, starts: int, seed=None, diam: int | None = None) -> int:
    """Mixing time maximised over ``starts`` random distinct start vertices.

    A lower bound on the true mixing time; exact once ``starts >= n``.
    """
    if starts < 1:
        raise ValueError("starts must be at least 1")
    if starts >= G.n:
        return mixing_time_from(G, range(G.n), diam)
    rng = np.random.default_rng(seed)
    return mixing_time_from(G, rng.choice(G.n, size=starts, replace=False), diam)


def peripheral_starts(G: Multigraph, k: int = 4) -> list[int]:
    """Likely slow starting points: the ``k`` vertices farthest from the core
    (deepest in hanging trees), or from the ends of a farthest-vertex sweep
    when there is no proper core."""
    core = core_vertices(G)
    if core and len(core) < G.n:
        dist = bfs_distances(G, core)
    else:
        a = int(np.argmax(bfs_distances(G, [0])))
        dist = bfs_distances(G, [a])
        dist[a] = dist.max() + 1
    order = np.lexsort((np.arange(G.n), -dist))
    return order[:k].tolist()


def mixing_time_estimate(G: Multigraph, starts: int = 8, seed=None,
                         exact_cutoff: int = DEFAULT_EXACT_CUTOFF,
                         diam: int | None = None) -> tuple[int, bool]:
    """``(tau, exact)``: exact below ``exact_cutoff`` vertices, otherwise the
    maximum over ``starts`` random starts and :func:`peripheral_starts`."""
    if G.n <= exact_cutoff:
        return mixing_time_exact(G, exact_cutoff, diam), True
    rng = np.random.default_rng(seed)
    chosen = set(rng.choice(G.n, size=min(starts, G.n), replace=False).tolist())
    chosen.update(peripheral_starts(G, starts))
    return mixing_time_from(G, chosen, diam), False


# ---------------------------------------------------------------- bound checks


@dataclass(frozen=True)
class BoundCheck:
    """``lhs <= rhs`` with both sides recorded.  ``holds`` is ``None`` when
    the inequality has no meaning for the input (noted in ``note``)."""

    name: str
    lhs: float
    rhs: float
    holds: bool | None
    exact: bool = True
    note: str = ""


def check_peres_bound(G: Multigraph, tau: int | None = None, diam: int | None = None,
                      cutoff: int = DEFAULT_EXACT_CUTOFF) -> BoundCheck:
    """``tau <= 8 * diam * |E|``."""
    diam = diameter(G) if diam is None else diam
    tau = mixing_time_exact(G, cutoff, diam) if tau is None else tau
    rhs = 8 * diam * G.m
    return BoundCheck("walk_diameter_edges", tau, rhs, tau <= rhs)


def _profile(G, profile, cutoff, max_sets=DEFAULT_MAX_SETS):
    if profile is None:
        profile = conductance_profile(G, exact_cutoff=cutoff, max_sets=max_sets)
        if profile and not profile[0].exact:
            raise GraphError(f"exact conductance profile of a {G.n}-vertex component "
                             f"exceeds the enumeration budget")
    return profile


def _inverse_sum(profile: Sequence[ProfilePoint], power: int) -> float:
    return float(sum(0.0 if math.isinf(p.value) else p.value ** -power for p in profile))


def check_diameter_conductance_bound(G: Multigraph, cutoff: int = DEFAULT_COND_CUTOFF,
                                     profile: Sequence[ProfilePoint] | None = None,
                                     diam: int | None = None,
                                     max_sets: int = DEFAULT_MAX_SETS) -> BoundCheck:
    """``diam <= 2 * sum_j 1/cond(2^j)``; empty windows add nothing.

    Without a supplied ``profile`` the exact one is computed: by subsets up
    to ``cutoff`` vertices, by connected-set enumeration (at most
    ``max_sets`` sets) beyond.  With a heuristic profile (upper bounds on
    ``cond``) the right side is a lower bound on the true one, so a pass is
    still conclusive.
    """
    profile = _profile(G, profile, cutoff, max_sets)
    diam = diameter(G) if diam is None else diam
    rhs = 2.0 * _inverse_sum(profile, 1)
    exact = all(p.exact for p in profile)
    return BoundCheck("diameter_conductance", diam, rhs, diam <= rhs, exact)


def check_mixing_conductance_bound(G: Multigraph, constant: float = MIXING_CONSTANT,
                                   tau: int | None = None,
                                   profile: Sequence[ProfilePoint] | None = None,
                                   cutoff: int = DEFAULT_COND_CUTOFF,
                                   exact_cutoff: int = DEFAULT_EXACT_CUTOFF,
                                   max_sets: int = DEFAULT_MAX_SETS) -> BoundCheck:
    """Ratio ``tau / sum_j cond(2^j)^-2`` against a calibrated ``constant``.

    ``lhs`` is the ratio and ``rhs`` the constant.  When every window is
    empty the sum vanishes and the ratio is undefined (``holds is None``).
    """
    profile = _profile(G, profile, cutoff, max_sets)
    tau = mixing_time_exact(G, exact_cutoff) if tau is None else tau
    total = _inverse_sum(profile, 2)
    exact = all(p.exact for p in profile)
    if total == 0.0:
        return BoundCheck("mixing_conductance", math.nan, constant, None, exact,
                          note=f"tau={tau}; every conductance window is empty")
    ratio = tau / total
    return BoundCheck("mixing_conductance", ratio, constant, ratio <= constant, exact,
                      note=f"tau={tau}; sum={total:.6g}")


# ---------------------------------------------------------------- reports


@dataclass
class WalkReport:
    component: int
    size: int
    edges: int
    stationary: list[float]
    tau: int | None
    tau_exact: bool
    diameter: int
    profile: list[ProfilePoint]
    checks: list[BoundCheck] = field(default_factory=list)

    def to_json(self) -> dict:
        d = asdict(self)
        d["profile"] = [
            {"j": p.j, "x": p.x, "cond": None if math.isinf(p.value) else p.value, "exact": p.exact}
            for p in self.profile
        ]
        d["checks"] = [
            {**asdict(c), "lhs": None if _bad(c.lhs) else c.lhs, "rhs": None if _bad(c.rhs) else c.rhs}
            for c in self.checks
        ]
        return d

    CSV_FIELDS = ("component", "size", "edges", "tau", "tau_exact", "diameter",
                  "diameter_conductance", "walk_diameter_edges", "mixing_conductance")

    def csv_row(self) -> dict:
        row = {"component": self.component, "size": self.size, "edges": self.edges,
               "tau": "" if self.tau is None else self.tau, "tau_exact": int(self.tau_exact),
               "diameter": self.diameter}
        verdicts = {c.name: c for c in self.checks}
        for name in self.CSV_FIELDS[6:]:
            c = verdicts.get(name)
            row[name] = "" if c is None else f"{c.lhs:.6g}<={c.rhs:.6g}:{_verdict(c.holds)}"
        return row


def _bad(x) -> bool:
    return isinstance(x, float) and not math.isfinite(x)


def _verdict(h) -> str:
    return "na" if h is None else ("pass" if h else "fail")


def walk_report(G: Multigraph, component: int = 0, exact_cutoff: int = DEFAULT_EXACT_CUTOFF,
                cond_cutoff: int = DEFAULT_COND_CUTOFF, starts: int = 8, seed=None,
                cond_sets: int = 0) -> WalkReport:
    """Measure one connected component.

    The mixing time is exact up to ``exact_cutoff`` vertices and otherwise a
    lower estimate (:func:`mixing_time_estimate`).  The conductance profile is
    exact up to ``cond_cutoff`` vertices, or by connected-set enumeration
    when ``cond_sets`` allows, and otherwise a BFS-sweep upper bound.
    """
    if G.m == 0:
        return WalkReport(component, G.n, 0, [1.0] * G.n, 0, True, 0, [], [])
    diam = diameter(G)
    tau, exact = mixing_time_estimate(G, starts, seed, exact_cutoff, diam)
    profile = conductance_profile(G, exact_cutoff=cond_cutoff, max_sets=cond_sets)
    checks = [check_diameter_conductance_bound(G, profile=profile, diam=diam)]
    if exact:
        checks.append(check_peres_bound(G, tau, diam))
        if all(p.exact for p in profile):
            checks.append(check_mixing_conductance_bound(G, tau=tau, profile=profile))
    return WalkReport(component, G.n, G.m, stationary(G).tolist(), tau, exact, diam, profile, checks)


def analyse_graph(G: Multigraph, exact_cutoff: int = DEFAULT_EXACT_CUTOFF,
                  cond_cutoff: int = DEFAULT_COND_CUTOFF, starts: int = 8, seed=None,
                  min_size: int = 1, cond_sets: int = 0) -> list[WalkReport]:
    """A :class:`WalkReport` per component, largest first."""
    parts = component_subgraphs(G)
    seeds = np.random.SeedSequence(seed).spawn(len(parts))
    out = []
    for cid, (H, _) in enumerate(parts):
        if H.n < min_size:
            continue
        out.append(walk_report(H, cid, exact_cutoff, cond_cutoff, starts, seeds[cid], cond_sets))
    return out


def reports_to_csv(reports: Iterable[WalkReport]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=WalkReport.CSV_FIELDS, lineterminator="\n")
    w.writeheader()
    for r in reports:
        w.writerow(r.csv_row())
    return buf.getvalue()


def reports_to_json(reports: Iterable[WalkReport]) -> str:
    return json.dumps([r.to_json() for r in reports], indent=2)
