"""Acceptance criteria 1 to 12, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines as they are
produced; they are also repeated in the terminal summary.
"""
import math
import time
from collections import Counter

import numpy as np
from scipy.stats import chisquare

from randdeg.degseq import FAMILIES, DegreeSequence, gen_family, is_feasible
from randdeg.graph import component_subgraphs
from randdeg.harness import (
    ExperimentConfig,
    check_colour_distribution,
    check_cycle_mass,
    check_giant,
    check_green_law,
    check_green_tail,
    check_kernel_uniqueness,
    check_scaling,
    run_experiment,
)
from randdeg.reduce import coloured_reduction, core_and_kernel, reassemble, reconstruct
from randdeg.sampler import cycle_ratio, cycle_union_count, sample_graph
from randdeg.walk import check_diameter_conductance_bound, check_peres_bound

from _graphs import barbell, clique, cycle, random_connected_graph, realizations, star, theta, two_regular_count


def _budget(start, seconds):
    used = time.perf_counter() - start
    return used <= seconds, f"{used:.1f}s/{seconds}s"


# ---------------------------------------------------------------- 1


def test_criterion_01_sampler_uniformity(verdict):
    t0 = time.perf_counter()
    D = DegreeSequence((2, 2, 2, 2))
    support = sorted(tuple(sorted(g)) for g in realizations(list(D.degrees)))
    assert len(support) == 3
    details, ok = [], True
    for mode in ("reject", "mcmc"):
        counts = Counter(tuple(sample_graph(D, seed=s, mode=mode).graph.canonical_edges()) for s in range(3000))
        outside = set(counts) - set(support)
        p = chisquare([counts[g] for g in support]).pvalue
        ok &= not outside and p > 0.001
        details.append(f"{mode} p={p:.3f}")
    fast, used = _budget(t0, 30)
    verdict(1, ok and fast, f"uniform over 3 realizations: {', '.join(details)}; {used}")


# ---------------------------------------------------------------- 2


def test_criterion_02_cycle_counts(verdict):
    t0 = time.perf_counter()
    exact = all(cycle_union_count(t) == two_regular_count(t) for t in range(9))
    t = 200
    dev = abs(cycle_ratio(t) / (t * (1 + 1 / (2 * t))) - 1)
    fast, used = _budget(t0, 5)
    verdict(2, exact and dev <= 1e-4 and fast,
            f"exact for t<=8: {exact}; ratio deviation at t=200 {dev:.2e} <= 1e-4; {used}")


# ---------------------------------------------------------------- 3


def _round_trip_corpus():
    specs = {
        "path-heavy": [{"n": 200, "f": 4}, {"n": 1000, "f_exp": 0.3}],
        "three-regular-leaves": [{"k": 30}, {"k": 200}],
        "two-stars": [{"n": 20}, {"n": 200}],
        "clique-leaves": [{"n": 60, "D": 5}, {"n": 200, "D": 8}],
        "star-separation": [{"l": 1000}, {"l": 8000}],
        "regular": [{"n": 60, "d": 2}, {"n": 100, "d": 3}],
        "subcritical-paths": [{"n": 100}, {"n": 400, "n1": 40}],
    }
    assert set(specs) == set(FAMILIES)
    cells = [(name, p) for name, ps in specs.items() for p in ps]
    per_cell = math.ceil(1000 / len(cells))
    for name, p in cells:
        D = gen_family(name, p)
        for s in range(per_cell):
            yield name, sample_graph(D, seed=s).graph


def test_criterion_03_reduction_round_trip(verdict):
    t0 = time.perf_counter()
    total, bad = 0, []
    for name, G in _round_trip_corpus():
        total += 1
        if reconstruct(coloured_reduction(G)) != G or reassemble(core_and_kernel(G)) != G:
            bad.append(name)
    fast, used = _budget(t0, 120)
    verdict(3, total >= 1000 and not bad and fast,
            f"{total - len(bad)}/{total} graphs round-trip across {len(FAMILIES)} families; {used}")


# ---------------------------------------------------------------- 4


def _small_connected_corpus(target=500, seed=0):
    """Connected components (two or more vertices) of graphs sampled from
    random feasible degree sequences on at most 14 vertices, topped up with
    random connected graphs."""
    rng = np.random.default_rng(seed)
    seen, out = set(), []
    while len(out) < target:
        n = int(rng.integers(2, 15))
        degs = rng.integers(1, n, n)
        if not is_feasible(degs):
            continue
        G = sample_graph(DegreeSequence(tuple(sorted(degs))), seed=int(rng.integers(2 ** 32))).graph
        for H, _ in component_subgraphs(G):
            key = (H.n, tuple(H.canonical_edges()))
            if H.n >= 2 and key not in seen:
                seen.add(key)
                out.append(H)
        H = random_connected_graph(rng, n, float(rng.uniform(0, 0.5)))
        key = (H.n, tuple(H.canonical_edges()))
        if key not in seen:
            seen.add(key)
            out.append(H)
    return out


def _fixtures():
    return ([cycle(k) for k in (3, 4, 5, 8, 12)] + [clique(k) for k in (2, 3, 4, 6, 8)]
            + [star(k) for k in (1, 2, 3, 5, 10)] + [theta(), barbell(40)])


def test_criterion_04_bounds_on_small_graphs(verdict):
    t0 = time.perf_counter()
    graphs = _small_connected_corpus() + _fixtures()
    failures = Counter()
    inexact = 0
    for G in graphs:
        peres = check_peres_bound(G)
        dc = check_diameter_conductance_bound(G)
        inexact += not dc.exact
        if not peres.holds:
            failures[f"walk-diameter-edges n={G.n} m={G.m}"] += 1
        if not dc.holds:
            failures[f"diameter-conductance n={G.n} m={G.m} ({dc.lhs}>{dc.rhs:g})"] += 1
    fast, used = _budget(t0, 300)
    bad = sum(failures.values())
    detail = (f"{len(graphs) - bad}/{len(graphs)} graphs satisfy both bounds, {inexact} inexact; "
              f"counterexamples {dict(failures) or 'none'}; {used}")
    verdict(4, not failures and not inexact and fast, detail)


# ---------------------------------------------------------------- 5


def test_criterion_05_cycle_mass(verdict):
    t0 = time.perf_counter()
    r = check_cycle_mass(ExperimentConfig("path-heavy", {"n": 20000, "f_exp": 0.3}, replicates=200, seed=5))
    (c,) = r.cells
    fast, used = _budget(t0, 600)
    verdict(5, r.verdict == "pass" and fast,
            f"fraction below cycle-mass bound {c['lhs']:.3f} >= {c['rhs']:.3f}; {used}")


# ---------------------------------------------------------------- 6


def test_criterion_06_colour_distribution(verdict):
    t0 = time.perf_counter()
    cfg = ExperimentConfig("path-heavy", {"n": [20000, 50000], "f_exp": 0.25}, replicates=200, seed=6)
    r = check_colour_distribution(cfg)
    applicable = [c for c in r.cells if c["verdict"] != "not applicable"]
    fast, used = _budget(t0, 600)
    shares = ", ".join(f"n={c['n']}: {c['lhs']:.3f}" for c in applicable)
    verdict(6, r.verdict == "pass" and len(applicable) == len(r.cells) and fast,
            f"share with r, y, g bounds holding ({shares}) >= 0.9; {used}")


# ---------------------------------------------------------------- 7


def test_criterion_07_green_lengths(verdict):
    t0 = time.perf_counter()
    law = check_green_law(ExperimentConfig("path-heavy", {"n": 400, "f": 6}, replicates=300, seed=7))
    tail = check_green_tail(50, 1000, 5, 500, replicates=100_000, seed=7)
    (lc,) = law.cells
    (tc,) = tail.cells
    fast, used = _budget(t0, 300)
    verdict(7, law.verdict == "pass" and tail.verdict == "pass" and fast,
            f"chi-square p={lc['p_value']:.3f} > 0.001; tail {tc['lhs']:.2e} <= {tc['rhs']:.2e}; {used}")


# ---------------------------------------------------------------- 8


def test_criterion_08_second_largest_scaling(verdict):
    t0 = time.perf_counter()
    cfg = ExperimentConfig("star-separation", {"l": [10000, 20000, 40000, 100000], "a": 2}, replicates=11,
                           seed=1, options={"measure": "second_largest", "form": "power",
                                            "expected": 1 / 3, "tolerance": 0.15})
    r = check_scaling(cfg)
    fit = r.metadata.get("fit", {})
    fast, used = _budget(t0, 1200)
    verdict(8, r.verdict == "pass" and fast,
            f"exponent {fit.get('slope', float('nan')):.3f} in 0.33 +- 0.15, R2 {fit.get('r2', float('nan')):.4f}; "
            f"{used}")


# ---------------------------------------------------------------- 9


def test_criterion_09_mixing_scaling(verdict):
    t0 = time.perf_counter()
    stars = check_scaling(ExperimentConfig("two-stars", {"n": [256, 512, 1024, 2048]}, replicates=3, seed=9,
                                           options={"measure": "tau", "form": "ratio"}))
    leaves = check_scaling(ExperimentConfig("three-regular-leaves", {"k": [512, 1024, 2048, 4096, 8192]},
                                            replicates=41, seed=1, options={"measure": "tau", "form": "log2"}))
    ratios = ", ".join(f"{q:.3f}" for q in stars.metadata.get("ratios", []))
    r2 = leaves.metadata.get("fit", {}).get("r2", float("nan"))
    fast, used = _budget(t0, 1800)
    verdict(9, stars.verdict == "pass" and leaves.verdict == "pass" and fast,
            f"two-stars doubling ratios [{ratios}] in [1.6, 2.4]; three-regular-leaves (ln n)^2 R2 {r2:.3f} >= 0.9; "
            f"{used}")


# ---------------------------------------------------------------- 10


def test_criterion_10_giant_component(verdict):
    t0 = time.perf_counter()
    sup = check_giant(ExperimentConfig("regular", {"n": 4096, "d": 3}, replicates=100, seed=10))
    sub = check_giant(ExperimentConfig("subcritical-paths", {"n": 4096}, replicates=100, seed=10))
    (a,), (b,) = sup.cells, sub.cells
    fast, used = _budget(t0, 600)
    ok = a["supercritical"] and not b["supercritical"] and sup.verdict == sub.verdict == "pass"
    verdict(10, ok and fast,
            f"3-regular share with largest >= 0.9n {a['lhs']:.2f}; degree<=2 share with largest <= n^0.7 "
            f"{b['lhs']:.2f}; both >= 0.95; {used}")


# ---------------------------------------------------------------- 11


def test_criterion_11_kernel_uniqueness(verdict):
    t0 = time.perf_counter()
    r = check_kernel_uniqueness(ExperimentConfig("regular", {"n": 2048, "d": 3}, replicates=100, seed=11))
    r2 = check_kernel_uniqueness(ExperimentConfig("path-heavy", {"n": 20000, "f_exp": 0.3}, replicates=100,
                                                  seed=11))
    cells = r.cells + r2.cells
    fast, used = _budget(t0, 300)
    ok = all(c["supercritical"] for c in cells) and r.verdict == r2.verdict == "pass"
    shares = ", ".join(f"{c['params']}: {c['lhs']:.2f}" for c in cells)
    verdict(11, ok and fast, f"share with at most one multicyclic component ({shares}) >= 0.95; {used}")


# ---------------------------------------------------------------- 12


def test_criterion_12_determinism(verdict, tmp_path):
    cfg = ExperimentConfig("path-heavy", {"n": [300, 600], "f": [4, 6]}, replicates=3, seed=12,
                           measurements=["structure", "diameter", "mixing", "bounds"], workers=2)
    run_experiment(cfg, tmp_path / "a.csv")
    run_experiment(cfg, tmp_path / "b.csv")
    a, b = (tmp_path / "a.csv").read_bytes(), (tmp_path / "b.csv").read_bytes()
    verdict(12, a == b and len(a) > 0, f"rerun with seed 12 gives identical CSV ({len(a)} bytes)")
