"""Uniform random graphs with a prescribed degree sequence.

Sampling (configuration model with rejection, or an edge-switching chain),
structural reductions (cycle components, core, kernel, coloured homeomorphic
reduction), and lazy-random-walk measurements (diameter, conductance
profiles, mixing times), plus an experiment harness.
"""
from ._kernels import BACKEND
from .degseq import DegreeSequence, critical_stats, gen_family, is_feasible, parse_degree_sequence
from .graph import Multigraph, components, cycle_components, diameter, set_stats

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "DegreeSequence",
    "Multigraph",
    "components",
    "critical_stats",
    "cycle_components",
    "diameter",
    "gen_family",
    "is_feasible",
    "parse_degree_sequence",
    "set_stats",
]
