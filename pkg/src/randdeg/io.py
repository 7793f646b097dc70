"""Edge-list and degree-sequence files.

Edge lists are text with one ``u v`` pair per line, vertices 1-indexed.  A
leading ``# n <count>`` comment fixes the vertex count (isolated vertices
would otherwise be lost); without it ``n`` is the largest label.  Loops are
written ``u u`` and parallel edges are repeated.
"""
from __future__ import annotations

import io as _io
import os
from typing import TextIO

from .degseq import DegreeSequence, parse_degree_sequence
from .graph import Multigraph

__all__ = ["read_edge_list", "write_edge_list", "format_edge_list", "read_degree_sequence"]


def _open_text(source):
    if isinstance(source, (str, os.PathLike)) and os.path.exists(source):
        return open(source, encoding="utf-8")
    if isinstance(source, str):
        return _io.StringIO(source)
    return source


def read_edge_list(source: str | os.PathLike | TextIO) -> Multigraph:
    fh = _open_text(source)
    n = None
    edges = []
    with fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                parts = line[1:].split()
                if len(parts) == 2 and parts[0] == "n":
                    n = int(parts[1])
                continue
            parts = line.split()
            if len(parts) < 2:
                raise ValueError(f"line {lineno}: expected 'u v'")
            u, v = int(parts[0]), int(parts[1])
            if u < 1 or v < 1:
                raise ValueError(f"line {lineno}: vertices are 1-indexed")
            edges.append((u - 1, v - 1))
    if n is None:
        n = max((max(e) for e in edges), default=-1) + 1
    return Multigraph.from_edges(n, edges)


def format_edge_list(G: Multigraph) -> str:
    lines = [f"# n {G.n}"]
    lines.extend(f"{u + 1} {v + 1}" for u, v in G.edges.tolist())
    return "\n".join(lines) + "\n"


def write_edge_list(G: Multigraph, target: str | os.PathLike | TextIO) -> None:
    text = format_edge_list(G)
    if isinstance(target, (str, os.PathLike)):
        with open(target, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        target.write(text)


def read_degree_sequence(source: str | os.PathLike | TextIO) -> DegreeSequence:
    """One integer per line, or a JSON array."""
    fh = _open_text(source)
    with fh:
        return parse_degree_sequence(fh.read())
