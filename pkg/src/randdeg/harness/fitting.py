"""Least-squares fits for scaling checks and gnuplot script emission."""
from __future__ import annotations

import math
from typing import NamedTuple, Sequence

import numpy as np
from scipy.stats import linregress

__all__ = ["Fit", "FORMS", "fit_power", "fit_log_squared", "doubling_ratios", "fit_form",
           "DegenerateGrid", "gnuplot_script"]

FORMS = ("power", "log2", "ratio")


class DegenerateGrid(ValueError):
    pass


class Fit(NamedTuple):
    form: str
    slope: float
    intercept: float
    r2: float
    xs: tuple[float, ...]
    ys: tuple[float, ...]

    def to_json(self) -> dict:
        return {"form": self.form, "slope": self.slope, "intercept": self.intercept,
                "r2": self.r2, "x": list(self.xs), "y": list(self.ys)}


def _grid(xs, ys, min_points, min_span):
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.shape != ys.shape:
        raise ValueError("x and y lengths differ")
    if len(np.unique(xs)) < min_points:
        raise DegenerateGrid(f"need at least {min_points} distinct grid points")
    if xs.min() <= 0 or xs.max() / xs.min() < min_span:
        raise DegenerateGrid(f"grid must span a factor of at least {min_span}")
    return xs, ys


def _linear(form, u, v, xs, ys):
    res = linregress(u, v)
    return Fit(form, float(res.slope), float(res.intercept), float(res.rvalue ** 2),
               tuple(map(float, xs)), tuple(map(float, ys)))


def fit_power(xs: Sequence[float], ys: Sequence[float], min_points: int = 4,
              min_span: float = 10.0) -> Fit:
    """``log y = slope * log x + intercept``; the slope is the exponent."""
    xs, ys = _grid(xs, ys, min_points, min_span)
    if (ys <= 0).any():
        raise ValueError("power fits need positive measurements")
    return _linear("power", np.log(xs), np.log(ys), xs, ys)


def fit_log_squared(xs: Sequence[float], ys: Sequence[float], min_points: int = 4,
                    min_span: float = 10.0) -> Fit:
    """``y = slope * (ln x)^2 + intercept``."""
    xs, ys = _grid(xs, ys, min_points, min_span)
    return _linear("log2", np.log(xs) ** 2, ys, xs, ys)


def doubling_ratios(xs: Sequence[float], ys: Sequence[float]) -> list[float]:
    """``y(2x) / y(x)`` for every consecutive pair of a doubling grid."""
    pairs = sorted(zip(map(float, xs), map(float, ys)))
    if len(pairs) < 2:
        raise DegenerateGrid("need at least two grid points")
    out = []
    for (x0, y0), (x1, y1) in zip(pairs, pairs[1:]):
        if not math.isclose(x1, 2 * x0):
            raise DegenerateGrid(f"grid is not doubling at {x0} -> {x1}")
        out.append(y1 / y0)
    return out


def fit_form(form: str, xs, ys, **kw) -> Fit:
    if form == "power":
        return fit_power(xs, ys, **kw)
    if form == "log2":
        return fit_log_squared(xs, ys, **kw)
    raise ValueError(f"no regression for form {form!r}")


def gnuplot_script(fit: Fit, data_file: str, output: str = "scaling.png",
                   xlabel: str = "n", ylabel: str = "measure") -> str:
    """Script plotting ``data_file`` (columns x, y) with the fitted curve."""
    if fit.form == "power":
        curve = f"exp({fit.intercept!r}) * x**{fit.slope!r}"
        scale = "set logscale xy\n"
    else:
        curve = f"{fit.slope!r} * log(x)**2 + {fit.intercept!r}"
        scale = "set logscale x\n"
    return (
        "set terminal pngcairo size 800,600\n"
        f"set output '{output}'\n"
        f"set xlabel '{xlabel}'\nset ylabel '{ylabel}'\n"
        f"{scale}"
        "set key top left\n"
        f"plot '{data_file}' using 1:2 with points pt 7 title 'measured', \\\n"
        f"     {curve} with lines title 'fit (R^2 = {fit.r2:.3f})'\n"
    )
