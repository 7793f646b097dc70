"""Sampling simple graphs with a given degree sequence.

``sample_graph`` is the entry point used by the harness and the CLI: it
picks rejection sampling from the configuration model when that is cheap
(exactly uniform) and the switching chain otherwise, and records provenance.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from ..degseq import DegreeSequence
from ..graph import Multigraph
from .configuration import (
    DEFAULT_MAX_TRIES,
    SamplerExhausted,
    _rejection,
    sample_configuration,
    sample_simple_rejection,
    simple_probability_estimate,
)
from .counting import cycle_ratio, cycle_union_count, log_cycle_union_count, normalised_cycle_count
from .delimiters import TailCheck, green_tail_bound_check, sample_green_lengths, sample_green_lengths_batch
from .switching import (
    InadmissibleSwitch,
    SwitchMove,
    admissible_switches,
    apply_switch,
    default_burn_in,
    havel_hakimi,
    is_admissible,
    random_switch,
    run_chain,
    sample_uniform_mcmc,
    switching_bound,
)

__all__ = [
    "MODES",
    "REJECTION_THRESHOLD",
    "Sample",
    "sample_graph",
    "choose_mode",
    "SamplerExhausted",
    "sample_configuration",
    "sample_simple_rejection",
    "simple_probability_estimate",
    "sample_uniform_mcmc",
    "havel_hakimi",
    "default_burn_in",
    "run_chain",
    "SwitchMove",
    "InadmissibleSwitch",
    "is_admissible",
    "apply_switch",
    "admissible_switches",
    "random_switch",
    "switching_bound",
    "cycle_union_count",
    "normalised_cycle_count",
    "log_cycle_union_count",
    "cycle_ratio",
    "sample_green_lengths",
    "sample_green_lengths_batch",
    "green_tail_bound_check",
    "TailCheck",
]

MODES = ("auto", "reject", "mcmc")
REJECTION_THRESHOLD = 0.01


class Sample(NamedTuple):
    graph: Multigraph
    mode: str
    seed: object
    tries: int
    steps: int
    accepted: int

    def provenance(self) -> dict:
        return {
            "mode": self.mode,
            "seed": self.seed if isinstance(self.seed, (int, str, type(None))) else repr(self.seed),
            "tries": self.tries,
            "steps": self.steps,
            "accepted": self.accepted,
            "n": self.graph.n,
            "m": self.graph.m,
        }


def choose_mode(D: DegreeSequence) -> str:
    """``reject`` when the configuration model is simple with estimated
    probability at least ``REJECTION_THRESHOLD``, else ``mcmc``."""
    return "reject" if simple_probability_estimate(D) >= REJECTION_THRESHOLD else "mcmc"


def sample_graph(D: DegreeSequence, seed=None, mode: str = "auto", burn_in: int | None = None,
                 max_tries: int = DEFAULT_MAX_TRIES) -> Sample:
    """Draw a simple graph with degree sequence ``D``.

    In ``auto`` mode an exhausted rejection sampler falls back to the chain,
    continuing with the same generator.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    rng = np.random.default_rng(seed)
    use = choose_mode(D) if mode == "auto" else mode
    tries = 0
    if use == "reject":
        try:
            graph, tries = _rejection(D, rng, max_tries)
            return Sample(graph, "reject", seed, tries, 0, 0)
        except SamplerExhausted:
            if mode == "reject":
                raise
            tries = max_tries
    steps = default_burn_in(D.m) if burn_in is None else int(burn_in)
    graph, accepted = run_chain(havel_hakimi(D), steps, rng)
    return Sample(graph, "mcmc", seed, tries, steps, accepted)
