"""Time each hot kernel under the compiled and pure-Python backends.

    python benchmarks/bench_kernels.py [--repeat 3] [--scale 1.0]

Both backends get identical inputs; outputs are compared before timing so a
speed number is never reported for a kernel that disagrees.
"""
from __future__ import annotations

import argparse
import itertools
import time

import numpy as np

from randdeg import gen_family
from randdeg._kernels import backends
from randdeg.graph import Multigraph, component_subgraphs
from randdeg.sampler import sample_graph


def _best(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def cases(scale: float):
    rng = np.random.default_rng(0)
    G = sample_graph(gen_family("regular", n=int(4000 * scale), d=3), seed=1).graph
    e = G.edges
    k = int(200_000 * scale)
    e1, e2 = rng.integers(0, len(e), k), rng.integers(0, len(e), k)
    flips = rng.integers(0, 4, k, dtype=np.uint8)

    def switch(mod):
        chain = mod.SwitchChain(G.n, e[:, 0], e[:, 1])
        acc = chain.run(e1, e2, flips)
        return acc, [a.tolist() for a in chain.edges()]

    yield f"switch chain ({k} proposals, m={G.m})", switch

    H, _ = component_subgraphs(sample_graph(gen_family("three-regular-leaves", k=int(300 * scale)), seed=2).graph)[0]
    indptr, indices = H.csr
    starts = np.arange(0, H.n, max(1, H.n // 16))

    yield f"lazy walk mixing ({len(starts)} starts, n={H.n})", \
        lambda mod: mod.mixing_steps(indptr, indices, starts, 10 ** 6, np.exp(-1) - 1e-12).tolist()

    yield f"all-source BFS eccentricities (n={H.n})", \
        lambda mod: [a.tolist() for a in mod.eccentricities(indptr, indices, np.arange(H.n))]

    small = Multigraph.from_edges(14, [(u, v) for u, v in itertools.combinations(range(14), 2)
                                       if rng.random() < 0.35] + [(i, i + 1) for i in range(13)])
    mult = small.multiplicity

    yield "subset conductance table (14 vertices)", \
        lambda mod: [a.tolist() for a in mod.connected_subset_stats(mult)]

    vol = float(H.degrees.sum())
    xs = [2.0 ** j for j in range(1, int(np.log2(vol)))]
    lo = np.array([x / 2 for x in xs])
    hi = np.array([min(x, vol / 2) for x in xs])
    src = np.arange(0, H.n, max(1, H.n // 64))

    yield f"BFS sweep conductance ({len(src)} sources, n={H.n})", \
        lambda mod: mod.sweep_min_cond(indptr, indices, src, lo, hi).tolist()


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--scale", type=float, default=1.0)
    args = ap.parse_args(argv)
    mods = backends()
    if "compiled" not in mods:
        print("compiled extension not built; timing the Python backend only")
    print(f"{'kernel':55s} {'python s':>10s} {'compiled s':>11s} {'speed-up':>9s}")
    for label, fn in cases(args.scale):
        tp, outp = _best(lambda: fn(mods["python"]), args.repeat)
        if "compiled" in mods:
            tc, outc = _best(lambda: fn(mods["compiled"]), args.repeat)
            if outp != outc:
                raise SystemExit(f"backends disagree on {label}")
            print(f"{label:55s} {tp:10.4f} {tc:11.4f} {tp / tc:8.1f}x")
        else:
            print(f"{label:55s} {tp:10.4f} {'-':>11s} {'-':>9s}")


if __name__ == "__main__":
    main()
