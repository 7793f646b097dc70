"""Run an experiment grid and collect one CSV row per (cell, replicate).

Replicate ``r`` of cell ``c`` draws all of its randomness from
``SeedSequence(seed, spawn_key=(c, r))``, so rows do not depend on worker
count or completion order and reruns are byte-identical.
"""
from __future__ import annotations

import csv
import io
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, TextIO

import numpy as np

from ..degseq import DegreeSequence, gen_family
from ..graph import (
    Multigraph,
    components,
    conductance_profile,
    cycle_components,
    diameter,
    diameter_lower_bound,
)
from ..reduce import coloured_reduction, colour_histogram, core_and_kernel, multicycle_component_count
from ..sampler import Sample, SamplerExhausted, sample_graph
from ..walk import (
    check_diameter_conductance_bound,
    check_peres_bound,
    mixing_time_estimate,
    peripheral_starts,
)
from .config import ExperimentConfig

__all__ = [
    "SCHEMA_VERSION",
    "COLUMNS",
    "ResultTable",
    "replicate_seed",
    "sample_replicate",
    "measure_graph",
    "measure_replicate",
    "run_experiment",
]

SCHEMA_VERSION = 1

COLUMNS = (
    "schema", "cell", "replicate", "family", "params", "seed_key", "status",
    "mode", "tries", "steps",
    "n", "m", "m_ne2", "n2", "cyc", "r", "y", "g", "g3",
    "components", "largest", "second", "multicycle", "kernel_vertices",
    "diameter", "diameter_exact", "tau", "tau_exact",
    "walk_bound_lhs", "walk_bound_rhs", "walk_bound_holds",
    "diam_cond_lhs", "diam_cond_rhs", "diam_cond_holds", "diam_cond_exact",
)


def replicate_seed(config: ExperimentConfig, cell: int, replicate: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(int(config.seed), spawn_key=(cell, replicate))


def _children(config, cell, replicate):
    sampler_seed, walk_seed = replicate_seed(config, cell, replicate).spawn(2)
    return sampler_seed, walk_seed


def sample_replicate(config: ExperimentConfig, cell: int, replicate: int,
                     D: DegreeSequence | None = None) -> Sample:
    """The sampled graph of one replicate, exactly as the runner draws it."""
    if D is None:
        D = gen_family(config.family, config.cells()[cell])
    sampler_seed, _ = _children(config, cell, replicate)
    return sample_graph(D, seed=sampler_seed, mode=config.mode, burn_in=config.burn_in)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def measure_graph(G: Multigraph, config: ExperimentConfig, walk_seed=None) -> dict:
    """Structural and walk measurements of a sampled graph (raw values)."""
    deg = G.degrees
    n2 = int(np.count_nonzero(deg == 2))
    parts = sorted((len(p) for p in components(G)), reverse=True)
    R = coloured_reduction(G)
    hist = colour_histogram(R)
    K = core_and_kernel(G)
    row = {
        "n": G.n, "m": G.m, "m_ne2": G.m - n2, "n2": n2,
        "cyc": cycle_components(G).cyc,
        "r": hist.r, "y": hist.y, "g": hist.g, "g3": hist.g3,
        "components": len(parts),
        "largest": parts[0] if parts else 0,
        "second": parts[1] if len(parts) > 1 else 0,
        "multicycle": multicycle_component_count(G),
        "kernel_vertices": len(K.kernel.vertices),
    }
    wanted = set(config.measurements)
    if not wanted & {"diameter", "mixing", "bounds"} or G.n == 0:
        return row
    biggest = max(components(G), key=lambda p: (len(p), -p[0]))
    H, _ = G.subgraph(biggest)
    exact_diam = H.n <= config.diameter_cutoff
    diam = diameter(H) if exact_diam else diameter_lower_bound(H)
    if "diameter" in wanted:
        row["diameter"], row["diameter_exact"] = diam, exact_diam
    tau = None
    if ("mixing" in wanted or "bounds" in wanted) and H.m > 0:
        tau, tau_exact = mixing_time_estimate(H, config.starts, walk_seed, config.exact_cutoff, diam)
        if "mixing" in wanted:
            row["tau"], row["tau_exact"] = tau, tau_exact
    if "bounds" in wanted and H.m > 0:
        if tau_exact and exact_diam:
            c = check_peres_bound(H, tau, diam)
            row.update(walk_bound_lhs=c.lhs, walk_bound_rhs=c.rhs, walk_bound_holds=c.holds)
        sources = None if H.n <= 64 else peripheral_starts(H, 16)
        profile = conductance_profile(H, exact_cutoff=config.cond_cutoff, sources=sources)
        c = check_diameter_conductance_bound(H, profile=profile, diam=diam)
        row.update(diam_cond_lhs=c.lhs, diam_cond_rhs=c.rhs, diam_cond_holds=c.holds,
                   diam_cond_exact=c.exact and exact_diam)
    return row


def measure_replicate(config: ExperimentConfig, cell: int, replicate: int,
                      params: dict | None = None) -> dict:
    params = config.cells()[cell] if params is None else params
    D = gen_family(config.family, params)
    sampler_seed, walk_seed = _children(config, cell, replicate)
    row = {
        "schema": SCHEMA_VERSION, "cell": cell, "replicate": replicate,
        "family": config.family, "params": json.dumps(params, sort_keys=True, separators=(",", ":")),
        "seed_key": f"{config.seed}:{cell}:{replicate}",
    }
    try:
        sample = sample_graph(D, seed=sampler_seed, mode=config.mode, burn_in=config.burn_in)
    except SamplerExhausted as exc:
        row.update(status="exhausted", mode="reject", tries=exc.tries)
        return {k: _fmt(row.get(k)) for k in COLUMNS}
    row.update(status="ok", mode=sample.mode, tries=sample.tries, steps=sample.steps)
    row.update(measure_graph(sample.graph, config, walk_seed))
    return {k: _fmt(row.get(k)) for k in COLUMNS}


def _task(args):
    config_json, cell, replicate, params = args
    return measure_replicate(ExperimentConfig.from_json(config_json), cell, replicate, params)


@dataclass
class ResultTable:
    columns: tuple[str, ...] = COLUMNS
    rows: list[dict] = field(default_factory=list)

    def __len__(self):
        return len(self.rows)

    def column(self, name: str, cast=float) -> list:
        return [cast(r[name]) if r[name] != "" else None for r in self.rows]

    def ok_rows(self) -> list[dict]:
        return [r for r in self.rows if r["status"] == "ok"]

    def to_csv(self) -> str:
        buf = io.StringIO()
        _write_header(buf)
        for r in self.rows:
            _write_row(buf, r)
        return buf.getvalue()

    @classmethod
    def read_csv(cls, source: str | Path | TextIO) -> "ResultTable":
        text = Path(source).read_text() if isinstance(source, (str, Path)) else source.read()
        reader = csv.DictReader(io.StringIO(text))
        if tuple(reader.fieldnames or ()) != COLUMNS:
            raise ValueError("CSV header does not match the result schema")
        return cls(COLUMNS, list(reader))


def _write_header(fh):
    csv.writer(fh, lineterminator="\n").writerow(COLUMNS)


def _write_row(fh, row):
    csv.writer(fh, lineterminator="\n").writerow([row[c] for c in COLUMNS])


def run_experiment(config: ExperimentConfig, out: str | os.PathLike | TextIO | None = None) -> ResultTable:
    """Sample and measure every (cell, replicate) of ``config``.

    Rows are written to ``out`` (path or open text file) as soon as they are
    available, in (cell, replicate) order.  Infeasible cells raise
    :class:`~randdeg.harness.config.InfeasibleCell` before any sampling; a
    rejection sampler that gives up marks its row ``exhausted``.
    """
    config.sequences()
    cells = config.cells()
    tasks = [(c, r, cells[c]) for c in range(len(cells)) for r in range(int(config.replicates))]
    table = ResultTable()
    close = False
    fh = None
    if out is not None:
        if isinstance(out, (str, os.PathLike)):
            fh = open(out, "w", newline="")
            close = True
        else:
            fh = out
        _write_header(fh)
        fh.flush()
    try:
        if int(config.workers) > 1 and len(tasks) > 1:
            blob = config.to_json()
            with ProcessPoolExecutor(max_workers=int(config.workers)) as pool:
                rows: Iterable[dict] = pool.map(_task, [(blob, c, r, p) for c, r, p in tasks])
                for row in rows:
                    table.rows.append(row)
                    if fh:
                        _write_row(fh, row)
                        fh.flush()
        else:
            for c, r, p in tasks:
                row = measure_replicate(config, c, r, p)
                table.rows.append(row)
                if fh:
                    _write_row(fh, row)
                    fh.flush()
    finally:
        if close:
            fh.close()
    return table
