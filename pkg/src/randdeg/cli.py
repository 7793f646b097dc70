"""Command line interface: ``randdeg {gen,stats,reduce,walk,exp}``.

Graphs travel as 1-indexed edge lists (see :mod:`randdeg.io`).
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .degseq import DegreeSequenceError, critical_stats, gen_family, is_feasible
from .graph import DEFAULT_COND_CUTOFF
from .harness import CHECKS, load_config, run_experiment
from .io import format_edge_list, read_degree_sequence, read_edge_list
from .reduce import colour_histogram, coloured_reduction, core_and_kernel
from .sampler import MODES, SamplerExhausted, sample_graph
from .walk import DEFAULT_EXACT_CUTOFF, analyse_graph, reports_to_csv, reports_to_json


def _param(text: str):
    if "=" not in text:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    key, value = text.split("=", 1)
    try:
        value = json.loads(value)
    except json.JSONDecodeError:
        pass
    return key, value


def _sequence(args):
    if args.degrees:
        return read_degree_sequence(args.degrees)
    if args.family:
        return gen_family(args.family, dict(args.param or []))
    raise SystemExit("give --family (with --param k=v) or --degrees FILE")


def _add_source(p):
    p.add_argument("--family", help="named degree-sequence family")
    p.add_argument("--param", action="append", type=_param, metavar="K=V", help="family parameter")
    p.add_argument("--degrees", help="file with a degree sequence (one per line or JSON)")


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_gen(args) -> int:
    D = _sequence(args)
    try:
        s = sample_graph(D, seed=args.seed, mode=args.mode, burn_in=args.burn_in)
    except SamplerExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    header = f"# provenance {json.dumps(s.provenance(), sort_keys=True)}\n"
    _emit(header + format_edge_list(s.graph), args.out)
    return 0


def cmd_stats(args) -> int:
    D = _sequence(args)
    out = {"n": D.n, "m": D.m, "n2": D.n2, "m_ne2": D.m_ne2, "max_degree": D.max_degree,
           "feasible": is_feasible(D), **critical_stats(D, rho=args.rho, mu=args.mu).to_json()}
    _emit(json.dumps(out, indent=2, sort_keys=True) + "\n", args.out)
    return 0


def _load_graph(args):
    if args.graph:
        return read_edge_list(args.graph)
    D = _sequence(args)
    return sample_graph(D, seed=args.seed, mode=args.mode).graph


def cmd_reduce(args) -> int:
    G = _load_graph(args)
    R = coloured_reduction(G)
    K = core_and_kernel(G)
    hist = colour_histogram(R)
    lines = ["# J"]
    lines += [f"{e.u + 1} {e.v + 1} {e.colour} {e.length}" for e in R.edges]
    lines.append("# kernel")
    lines += [f"{e.u + 1} {e.v + 1}" for e in K.kernel.edges]
    summary = {"r": hist.r, "y": hist.y, "g": hist.g,
               "g_i": {str(k): v for k, v in hist.green_lengths.items()},
               "k": len(K.kernel.vertices), "kernel_edges": len(K.kernel.edges), "cyc": R.cyc}
    lines.append("# summary")
    lines.append(json.dumps(summary, sort_keys=True))
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_walk(args) -> int:
    G = _load_graph(args)
    reports = analyse_graph(G, exact_cutoff=args.exact_cutoff, cond_cutoff=args.cond_cutoff,
                            starts=args.starts, seed=args.seed, min_size=args.min_size,
                            cond_sets=args.cond_sets)
    _emit(reports_to_json(reports) + "\n", args.out)
    if args.csv:
        Path(args.csv).write_text(reports_to_csv(reports))
    return 0


def cmd_exp_run(args) -> int:
    config = load_config(args.config)
    if args.workers:
        config.workers = args.workers
    out = args.out or sys.stdout
    run_experiment(config, out)
    return 0


def cmd_exp_check(args) -> int:
    config = load_config(args.config)
    result = CHECKS[args.name](config)
    _emit(result.to_json() + "\n", args.out)
    return 1 if result.verdict == "fail" else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="randdeg", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="sample a simple graph with a degree sequence")
    _add_source(p)
    p.add_argument("--mode", choices=MODES, default="auto")
    p.add_argument("--seed", type=int)
    p.add_argument("--burn-in", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("stats", help="degree-sequence statistics and classification")
    _add_source(p)
    p.add_argument("--rho", type=float, default=0.05)
    p.add_argument("--mu", type=float, default=0.05)
    p.add_argument("--out")
    p.set_defaults(func=cmd_stats)

    for name, func, text in (("reduce", cmd_reduce, "coloured reduction and kernel of a graph"),
                             ("walk", cmd_walk, "mixing, diameter and conductance per component")):
        p = sub.add_parser(name, help=text)
        p.add_argument("graph", nargs="?", help="edge-list file; otherwise sample from --family/--degrees")
        _add_source(p)
        p.add_argument("--mode", choices=MODES, default="auto")
        p.add_argument("--seed", type=int)
        p.add_argument("--out")
        p.set_defaults(func=func)
        if name == "walk":
            p.add_argument("--exact-cutoff", type=int, default=DEFAULT_EXACT_CUTOFF)
            p.add_argument("--cond-cutoff", type=int, default=DEFAULT_COND_CUTOFF)
            p.add_argument("--cond-sets", type=int, default=0,
                           help="budget for exact connected-set enumeration above --cond-cutoff")
            p.add_argument("--starts", type=int, default=8)
            p.add_argument("--min-size", type=int, default=1)
            p.add_argument("--csv", help="also write one CSV row per component here")

    exp = sub.add_parser("exp", help="experiments").add_subparsers(dest="exp_command", required=True)
    p = exp.add_parser("run", help="run a config and write the result CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.add_argument("--workers", type=int)
    p.set_defaults(func=cmd_exp_run)
    p = exp.add_parser("check", help="run a named empirical check")
    p.add_argument("--name", required=True, choices=sorted(CHECKS))
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_exp_check)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DegreeSequenceError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
