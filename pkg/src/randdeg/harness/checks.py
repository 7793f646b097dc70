"""Empirical checks of structural properties and scaling laws.

Every check takes an :class:`ExperimentConfig` (family, grid, replicates,
seed, sampler mode) plus check-specific settings from ``config.options`` or
keyword arguments, and returns a :class:`CheckResult`.  Per-cell statistics
always carry the numeric sides of each comparison, not just a verdict.
High-probability statements are tested with a three-standard-error
binomial slack on the empirical frequency.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from statistics import median
from typing import Callable, Iterator

import numpy as np
from scipy.stats import chi2_contingency

from ..degseq import DegreeSequence, _floor_cbrt_over, critical_stats
from ..graph import Multigraph, components, cycle_components
from ..reduce import GREEN, coloured_reduction, colour_histogram, core_and_kernel, multicycle_component_count
from ..sampler import (
    SamplerExhausted,
    green_tail_bound_check,
    sample_green_lengths_batch,
    switching_bound,
)
from .config import ExperimentConfig
from .fitting import DegenerateGrid, doubling_ratios, fit_form, gnuplot_script
from .runner import replicate_seed, run_experiment, sample_replicate

__all__ = [
    "PASS",
    "FAIL",
    "NOT_APPLICABLE",
    "SIGMAS",
    "CheckResult",
    "binomial_sigma",
    "cycle_mass_bound",
    "check_cycle_mass",
    "check_colour_distribution",
    "check_green_law",
    "check_green_tail",
    "check_scaling",
    "check_kernel_uniqueness",
    "check_star_separation_probability",
    "check_star_separation",
    "check_giant",
    "CHECKS",
]

PASS, FAIL, NOT_APPLICABLE = "pass", "fail", "not applicable"
SIGMAS = 3.0
F0_PROXY = 64


@dataclass
class CheckResult:
    name: str
    verdict: str
    cells: list[dict] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True, default=_jsonable)


def _jsonable(x):
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, np.ndarray):
        return x.tolist()
    return str(x)


def binomial_sigma(p: float, trials: int) -> float:
    return math.sqrt(max(p * (1 - p), 0.0) / trials) if trials else math.inf


def _combine(name, cells, metadata=None) -> CheckResult:
    verdicts = [c["verdict"] for c in cells]
    applicable = [v for v in verdicts if v != NOT_APPLICABLE]
    if not applicable:
        verdict = NOT_APPLICABLE
    else:
        verdict = PASS if all(v == PASS for v in applicable) else FAIL
    return CheckResult(name, verdict, cells, metadata or {})


def _opt(config: ExperimentConfig, kwargs: dict, key: str, default):
    if key in kwargs and kwargs[key] is not None:
        return kwargs[key]
    return config.options.get(key, default)


def _samples(config: ExperimentConfig, cell: int, D: DegreeSequence) -> Iterator[tuple[int, Multigraph | None]]:
    for rep in range(int(config.replicates)):
        try:
            yield rep, sample_replicate(config, cell, rep, D).graph
        except SamplerExhausted:
            yield rep, None


# ---------------------------------------------------------------- cycle mass


def cycle_mass_bound(D: DegreeSequence) -> float:
    """``203 (n_2 + m_ne2) ln(m_ne2) / m_ne2``."""
    return 203.0 * (D.n2 + D.m_ne2) * math.log(D.m_ne2) / D.m_ne2


def check_cycle_mass(config: ExperimentConfig, f0: int | None = None) -> CheckResult:
    """Fraction of replicates whose cycle-component mass is below the bound,
    against ``1 - 1/ln ln m_ne2``.  Cells with ``m_ne2`` below ``f0`` (the
    stand-in for the unspecified threshold) are not applicable."""
    f0 = int(_opt(config, {"f0": f0}, "f0", F0_PROXY))
    cells = []
    for cell, (params, D) in enumerate(zip(config.cells(), config.sequences())):
        info = {"params": params, "n": D.n, "m_ne2": D.m_ne2, "n2": D.n2}
        if D.m_ne2 < max(f0, 3):
            cells.append({**info, "verdict": NOT_APPLICABLE,
                          "note": f"m_ne2 = {D.m_ne2} is below the threshold {f0}"})
            continue
        bound = cycle_mass_bound(D)
        cyc = [cycle_components(G).cyc for _, G in _samples(config, cell, D) if G is not None]
        hits = sum(c < bound for c in cyc)
        target = 1 - 1 / math.log(math.log(D.m_ne2))
        sigma = binomial_sigma(target, len(cyc))
        frac = hits / len(cyc) if cyc else 0.0
        cells.append({**info, "bound": bound, "max_cyc": max(cyc, default=None),
                      "replicates": len(cyc), "lhs": frac, "rhs": target - SIGMAS * sigma,
                      "target": target, "sigma": sigma,
                      "verdict": PASS if cyc and frac >= target - SIGMAS * sigma else FAIL})
    return _combine("cycle_mass", cells, {"f0": f0, "log": "natural"})


# ---------------------------------------------------------------- colours


def check_colour_distribution(config: ExperimentConfig, delta: float | None = None,
                              min_fraction: float | None = None) -> CheckResult:
    """Share of replicates with ``r, y <= 3d/(1-4d) m_ne2`` and
    ``g >= (1-8d)/(1-4d) m_ne2`` for ``d = delta``, on cells with
    ``m_ne2 <= delta * m``."""
    delta = float(_opt(config, {"delta": delta}, "delta", 0.01))
    min_fraction = float(_opt(config, {"min_fraction": min_fraction}, "min_fraction", 0.9))
    cells = []
    for cell, (params, D) in enumerate(zip(config.cells(), config.sequences())):
        info = {"params": params, "n": D.n, "m": D.m, "m_ne2": D.m_ne2}
        if D.m_ne2 > delta * D.m or D.m_ne2 == 0:
            cells.append({**info, "verdict": NOT_APPLICABLE,
                          "note": f"m_ne2 = {D.m_ne2} exceeds delta * m = {delta * D.m:.6g}"})
            continue
        ry_cap = 3 * delta / (1 - 4 * delta) * D.m_ne2
        g_floor = (1 - 8 * delta) / (1 - 4 * delta) * D.m_ne2
        good, seen, worst = 0, 0, {"r": 0, "y": 0, "g": math.inf}
        for _, G in _samples(config, cell, D):
            if G is None:
                continue
            h = colour_histogram(coloured_reduction(G))
            seen += 1
            worst = {"r": max(worst["r"], h.r), "y": max(worst["y"], h.y), "g": min(worst["g"], h.g)}
            good += h.r <= ry_cap and h.y <= ry_cap and h.g >= g_floor
        frac = good / seen if seen else 0.0
        cells.append({**info, "r_y_cap": ry_cap, "g_floor": g_floor, "worst": worst,
                      "replicates": seen, "lhs": frac, "rhs": min_fraction,
                      "verdict": PASS if frac >= min_fraction else FAIL})
    return _combine("colour_distribution", cells, {"delta": delta})


# ---------------------------------------------------------------- green law


def _pooled_bins(a: np.ndarray, b: np.ndarray, min_expected: float = 5.0) -> np.ndarray:
    """2 x k contingency table over value bins, merging sparse neighbours."""
    values = np.unique(np.concatenate([a, b]))
    table = np.stack([np.array([np.sum(a == v) for v in values]),
                      np.array([np.sum(b == v) for v in values])]).astype(float)
    total = table.sum()
    share = table.sum(axis=1, keepdims=True) / total
    cols = []
    acc = np.zeros(2)
    for j in range(table.shape[1]):
        acc = acc + table[:, j]
        if (share[:, 0] * acc.sum() >= min_expected).all():
            cols.append(acc)
            acc = np.zeros(2)
    if acc.sum():
        if cols:
            cols[-1] = cols[-1] + acc
        else:
            cols.append(acc)
    return np.stack(cols, axis=1)


def check_green_law(config: ExperimentConfig, alpha: float | None = None,
                    c_values=None, reference_draws: int | None = None,
                    min_replicates: int | None = None) -> CheckResult:
    """Green path lengths of sampled graphs against the delimiter model.

    From each replicate with at least two green edges, one green edge is
    chosen uniformly and its internal-vertex count recorded; the reference
    sample draws ``reference_draws`` first-path counts from the delimiter
    model with the same ``g`` and ``N`` (degree-2 vertices on green paths
    beyond the two fixed ends of each).  A two-sample chi-square test must
    give p above ``alpha``, and for each ``c`` the share of chosen edges
    with at least ``2 + cN/(g-1)`` internal vertices must be at most
    ``exp(-c/2)`` plus three standard errors.
    """
    alpha = float(_opt(config, {"alpha": alpha}, "alpha", 0.001))
    c_values = list(_opt(config, {"c_values": c_values}, "c_values", [2, 4]))
    reference_draws = int(_opt(config, {"reference_draws": reference_draws}, "reference_draws", 20))
    min_replicates = int(_opt(config, {"min_replicates": min_replicates}, "min_replicates", 20))
    cells = []
    for cell, (params, D) in enumerate(zip(config.cells(), config.sequences())):
        observed, reference, scaled = [], [], []
        skipped = 0
        for rep, G in _samples(config, cell, D):
            if G is None:
                skipped += 1
                continue
            greens = [len(e.internal) for e in coloured_reduction(G).edges if e.colour == GREEN]
            g = len(greens)
            if g <= 1:
                skipped += 1
                continue
            N = sum(greens) - 2 * g
            check_seed, ref_seed = replicate_seed(config, cell, rep).spawn(4)[2:]
            pick = greens[int(np.random.default_rng(check_seed).integers(g))]
            observed.append(pick)
            reference.extend(sample_green_lengths_batch(g, N, reference_draws, ref_seed)[:, 0].tolist())
            scaled.append((pick, N, g))
        info = {"params": params, "n": D.n, "used": len(observed), "skipped": skipped}
        if len(observed) < min_replicates:
            cells.append({**info, "verdict": NOT_APPLICABLE,
                          "note": f"only {len(observed)} replicates with more than one green edge"})
            continue
        table = _pooled_bins(np.asarray(observed), np.asarray(reference))
        if table.shape[1] < 2:
            p_value = 1.0
        else:
            p_value = float(chi2_contingency(table)[1])
        tails = []
        for c in c_values:
            freq = float(np.mean([k >= 2 + c * N / (g - 1) for k, N, g in scaled]))
            cap = math.exp(-c / 2)
            sigma = binomial_sigma(cap, len(scaled))
            tails.append({"c": c, "lhs": freq, "rhs": cap + SIGMAS * sigma, "holds": freq <= cap + SIGMAS * sigma})
        ok = p_value > alpha and all(t["holds"] for t in tails)
        cells.append({**info, "bins": table.shape[1], "p_value": p_value, "alpha": alpha,
                      "lhs": p_value, "rhs": alpha, "tails": tails,
                      "verdict": PASS if ok else FAIL})
    return _combine("green_law", cells, {"reference_draws": reference_draws})


def check_green_tail(g: int, N: int, s: int, B: int, replicates: int = 100_000, seed=0) -> CheckResult:
    """Delimiter-model frequency of the first ``s`` green paths exceeding
    ``2s + B`` internal vertices against ``P(Bin(g-1, B/N) < s)``."""
    t = green_tail_bound_check(g, N, s, B, replicates, seed)
    cell = {"g": g, "N": N, "s": s, "B": B, "replicates": replicates,
            "lhs": t.empirical, "rhs": t.bound + SIGMAS * t.sigma, "bound": t.bound,
            "sigma": t.sigma, "verdict": PASS if t.holds else FAIL}
    return _combine("green_tail", [cell])


# ---------------------------------------------------------------- scaling

_MEASURES = {
    "second_largest": ("second", ["structure"]),
    "largest": ("largest", ["structure"]),
    "tau": ("tau", ["mixing"]),
    "diameter": ("diameter", ["diameter"]),
}


def check_scaling(config: ExperimentConfig, **kwargs) -> CheckResult:
    """Fit a per-cell statistic of a measure against a predicted form.

    Options: ``measure`` (second_largest, largest, tau, diameter), ``form``
    (power, log2, ratio), ``x`` (``n`` or a grid parameter), ``expected`` and
    ``tolerance`` for power fits, ``min_r2`` (0.9), ``ratio_range``
    ([1.6, 2.4]), ``min_span`` (10), ``gnuplot`` (path prefix for a data
    file and plot script).
    """
    get = lambda k, d: _opt(config, kwargs, k, d)  # noqa: E731
    measure = get("measure", "second_largest")
    form = get("form", "power")
    x_key = get("x", "n")
    min_r2 = float(get("min_r2", 0.9))
    if measure not in _MEASURES:
        raise ValueError(f"unknown measure {measure!r}")
    column, needed = _MEASURES[measure]
    run_cfg = ExperimentConfig.from_dict({**asdict(config),
                                          "measurements": sorted(set(config.measurements) | set(needed))})
    table = run_experiment(run_cfg)
    seqs = config.sequences()
    cells_params = config.cells()
    xs, ys, per_cell = [], [], []
    for cell, (params, D) in enumerate(zip(cells_params, seqs)):
        vals = [float(r[column]) for r in table.rows
                if int(r["cell"]) == cell and r["status"] == "ok" and r[column] != ""]
        x = float(D.n if x_key == "n" else params[x_key])
        y = median(vals) if vals else math.nan
        xs.append(x)
        ys.append(y)
        per_cell.append({"params": params, "x": x, "values": vals, "median": y})
    meta = {"measure": measure, "form": form, "x": x_key, "statistic": "median",
            "h_function": config.h_function}
    try:
        if form == "ratio":
            lo, hi = get("ratio_range", [1.6, 2.4])
            ratios = doubling_ratios(xs, ys)
            ok = all(lo <= q <= hi for q in ratios)
            meta.update(ratios=ratios, lhs=ratios, rhs=[lo, hi])
        else:
            fit = fit_form(form, xs, ys, min_span=float(get("min_span", 10.0)))
            meta.update(fit=fit.to_json(), lhs=fit.r2, rhs=min_r2)
            ok = fit.r2 >= min_r2
            if form == "power":
                expected = float(get("expected", 1 / 3))
                tol = float(get("tolerance", 0.15))
                meta.update(expected=expected, tolerance=tol)
                ok = ok and abs(fit.slope - expected) <= tol
            else:
                ok = ok and fit.slope > 0
            prefix = get("gnuplot", None)
            if prefix:
                data = Path(f"{prefix}.dat")
                data.write_text("".join(f"{x!r} {y!r}\n" for x, y in zip(xs, ys)))
                Path(f"{prefix}.gp").write_text(
                    gnuplot_script(fit, str(data), f"{prefix}.png", x_key, measure))
    except DegenerateGrid as exc:
        return CheckResult("scaling", NOT_APPLICABLE, per_cell, {**meta, "note": str(exc)})
    return CheckResult("scaling", PASS if ok else FAIL, per_cell, meta)


# ---------------------------------------------------------------- kernel


def check_kernel_uniqueness(config: ExperimentConfig, min_fraction: float | None = None) -> CheckResult:
    """At most one component with two or more independent cycles, and
    exactly one whenever the kernel is nonempty."""
    min_fraction = float(_opt(config, {"min_fraction": min_fraction}, "min_fraction", 0.95))
    cells = []
    for cell, (params, D) in enumerate(zip(config.cells(), config.sequences())):
        stats = critical_stats(D)
        good = seen = empty = 0
        counts = []
        for _, G in _samples(config, cell, D):
            if G is None:
                continue
            seen += 1
            mc = multicycle_component_count(G)
            kernel = len(core_and_kernel(G).kernel.vertices)
            counts.append(mc)
            empty += kernel == 0
            good += mc <= 1 and (kernel == 0 or mc == 1)
        frac = good / seen if seen else 0.0
        cell_info = {"params": params, "n": D.n, "supercritical": stats.supercritical,
                     "replicates": seen, "kernel_empty": empty, "max_count": max(counts, default=0),
                     "lhs": frac, "rhs": min_fraction,
                     "verdict": PASS if frac >= min_fraction else FAIL}
        if empty == seen:
            cell_info["branch"] = "kernel empty"
        cells.append(cell_info)
    return _combine("kernel_uniqueness", cells)


# ---------------------------------------------------------------- star separation


def _star_centre_event(G: Multigraph, centre_degree: int, hub: int) -> bool:
    """Some vertex of degree ``centre_degree`` (other than the hub) has only
    leaf neighbours, i.e. is the centre of a star component."""
    deg = G.degrees
    indptr, indices = G.csr
    for v in np.flatnonzero(deg == centre_degree):
        if v == hub:
            continue
        nb = indices[indptr[v]:indptr[v + 1]]
        if (deg[nb] == 1).all():
            return True
    return False


def _star_separation_cell(config: ExperimentConfig, cell: int, params: dict) -> dict:
    ell = int(params.get("l", params.get("ell")))
    a = float(params.get("a", 15))
    rho = float(params.get("rho", 0.02))
    if a <= 10:
        raise ValueError("the separation argument needs a > 10")
    D = config.sequences()[cell]
    centre_degree = _floor_cbrt_over(ell, a)
    hits = seen = 0
    for _, G in _samples(config, cell, D):
        if G is None:
            continue
        seen += 1
        hub = int(np.argmax(G.degrees))
        hits += _star_centre_event(G, centre_degree, hub)
    target = 1 - 1 / a
    sigma = binomial_sigma(target, seen)
    freq = hits / seen if seen else 0.0
    # a single pair of middle vertices is adjacent with probability at most
    # (m^(2/3) / a^2) / (2m / 3) by the switching inequality
    pair_bound = switching_bound(2 * D.m / 3, D.m ** (2 / 3) / a ** 2, 1.0)
    return {"l": ell, "a": a, "rho": rho, "n": D.n, "m": D.m, "hub_degree": D.max_degree,
            "centre_degree": centre_degree, "replicates": seen, "lhs": freq,
            "rhs": target - SIGMAS * sigma, "target": target, "pair_edge_bound": pair_bound,
            "verdict": PASS if seen and freq >= target - SIGMAS * sigma else FAIL}


def check_star_separation_probability(ell: int, a: float, rho: float = 0.02, replicates: int = 200,
                                      seed: int = 0, mode: str = "auto") -> CheckResult:
    """Frequency with which some vertex of the middle degree
    ``floor(l^(1/3)/a)`` is the centre of a star component, against
    ``1 - 1/a`` minus three standard errors."""
    if a <= 10:
        raise ValueError("the separation argument needs a > 10")
    if replicates < 1:
        raise ValueError("replicates must be at least 1")
    params = {"l": ell, "a": a, "rho": rho}
    config = ExperimentConfig("star-separation", [params], replicates=replicates, seed=seed, mode=mode)
    return _combine("star_separation", [_star_separation_cell(config, 0, params)],
                    {"rho_note": "rho scaled up from the asymptotic regime"})


def check_star_separation(config: ExperimentConfig) -> CheckResult:
    """:func:`check_star_separation_probability` for every cell of a
    star-separation config."""
    if config.family != "star-separation":
        raise ValueError("star separation check needs the star-separation family")
    cells = [_star_separation_cell(config, i, p) for i, p in enumerate(config.cells())]
    return _combine("star_separation", cells, {"rho_note": "rho scaled up from the asymptotic regime"})


# ---------------------------------------------------------------- giant component


def check_giant(config: ExperimentConfig, fraction: float | None = None, exponent: float | None = None,
                min_fraction: float | None = None) -> CheckResult:
    """Supercritical cells need a component of at least ``fraction * n``
    vertices; subcritical ones need every component below ``n^exponent``."""
    fraction = float(_opt(config, {"fraction": fraction}, "fraction", 0.9))
    exponent = float(_opt(config, {"exponent": exponent}, "exponent", 0.7))
    min_fraction = float(_opt(config, {"min_fraction": min_fraction}, "min_fraction", 0.95))
    cells = []
    for cell, (params, D) in enumerate(zip(config.cells(), config.sequences())):
        stats = critical_stats(D)
        largest = []
        for _, G in _samples(config, cell, D):
            if G is not None:
                largest.append(max(len(p) for p in components(G)))
        if stats.supercritical:
            cut = fraction * D.n
            good = sum(s >= cut for s in largest)
            rule = f"largest >= {fraction} n"
        else:
            cut = D.n ** exponent
            good = sum(s <= cut for s in largest)
            rule = f"largest <= n^{exponent}"
        frac = good / len(largest) if largest else 0.0
        cells.append({"params": params, "n": D.n, "supercritical": stats.supercritical,
                      "R": stats.R, "m_ne2": stats.m_ne2, "rule": rule, "cut": cut,
                      "largest_median": median(largest) if largest else None,
                      "replicates": len(largest), "lhs": frac, "rhs": min_fraction,
                      "verdict": PASS if frac >= min_fraction else FAIL})
    return _combine("giant", cells)


CHECKS: dict[str, Callable[[ExperimentConfig], CheckResult]] = {
    "cycle_mass": check_cycle_mass,
    "colour_distribution": check_colour_distribution,
    "green_law": check_green_law,
    "scaling": check_scaling,
    "kernel_uniqueness": check_kernel_uniqueness,
    "star_separation": check_star_separation,
    "giant": check_giant,
}
