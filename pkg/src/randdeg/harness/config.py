"""Experiment configuration with JSON round-tripping.

A configuration names a degree-sequence family and a parameter grid.  The
grid is either a mapping from parameter name to a list of values (every
combination is a cell, in key order) or an explicit list of parameter
mappings.  An empty mapping or list is an empty grid with no cells.

Example::

    {
      "family": "regular",
      "grid": {"n": [1024], "d": [3]},
      "replicates": 5,
      "seed": 7,
      "mode": "auto",
      "measurements": ["structure", "diameter"],
      "options": {}
    }
"""
from __future__ import annotations

import itertools
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

from ..degseq import FAMILIES, DegreeSequence, DegreeSequenceError, gen_family
from ..graph import DEFAULT_COND_CUTOFF
from ..sampler import MODES
from ..walk import DEFAULT_EXACT_CUTOFF

__all__ = ["MEASUREMENTS", "ConfigError", "InfeasibleCell", "ExperimentConfig", "load_config"]

# structure: components, cycle mass, colours, multicycle count (always on)
# diameter: diameter of the largest component
# mixing: mixing time of the largest component
# bounds: walk/diameter/conductance inequalities on the largest component
MEASUREMENTS = ("structure", "diameter", "mixing", "bounds")


class ConfigError(ValueError):
    pass


class InfeasibleCell(ConfigError):
    def __init__(self, cell: int, params: dict, reason: str):
        super().__init__(f"cell {cell} {params}: {reason}")
        self.cell = cell
        self.params = params


@dataclass
class ExperimentConfig:
    family: str
    grid: Any = field(default_factory=dict)
    replicates: int = 1
    seed: int = 0
    mode: str = "auto"
    measurements: list[str] = field(default_factory=lambda: ["structure"])
    exact_cutoff: int = DEFAULT_EXACT_CUTOFF
    cond_cutoff: int = DEFAULT_COND_CUTOFF
    diameter_cutoff: int = 5000
    starts: int = 8
    burn_in: int | None = None
    workers: int = 1
    h_function: str = "ln ln n"
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        self.validate()

    def validate(self):
        if self.family not in FAMILIES:
            raise ConfigError(f"unknown family {self.family!r}; choose from {sorted(FAMILIES)}")
        if int(self.replicates) < 1:
            raise ConfigError("replicates must be at least 1")
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}")
        bad = set(self.measurements) - set(MEASUREMENTS)
        if bad:
            raise ConfigError(f"unknown measurements {sorted(bad)}")
        if int(self.workers) < 1:
            raise ConfigError("workers must be at least 1")
        if not isinstance(self.grid, (dict, list)):
            raise ConfigError("grid must be a mapping of lists or a list of mappings")

    def cells(self) -> list[dict]:
        """Parameter mapping of every grid cell, in a fixed order."""
        if isinstance(self.grid, list):
            return [dict(c) for c in self.grid]
        if not self.grid:
            return []
        keys = list(self.grid)
        values = [v if isinstance(v, list) else [v] for v in (self.grid[k] for k in keys)]
        return [dict(zip(keys, combo)) for combo in itertools.product(*values)]

    def sequences(self) -> list[DegreeSequence]:
        """Degree sequence of every cell; raises :class:`InfeasibleCell`."""
        out = []
        for i, params in enumerate(self.cells()):
            try:
                out.append(gen_family(self.family, params))
            except (DegreeSequenceError, KeyError, TypeError, ValueError) as exc:
                raise InfeasibleCell(i, params, str(exc)) from exc
        return out

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = set(cls.__dataclass_fields__)
        extra = set(data) - known
        if extra:
            raise ConfigError(f"unknown config keys {sorted(extra)}")
        return cls(**data)

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        return cls.from_dict(json.loads(text))

    def save(self, path: str | Path):
        Path(path).write_text(self.to_json() + "\n")


def load_config(path: str | Path) -> ExperimentConfig:
    return ExperimentConfig.from_json(Path(path).read_text())
