"""Experiment grids, result tables and empirical checks."""
from .checks import (
    CHECKS,
    FAIL,
    NOT_APPLICABLE,
    PASS,
    CheckResult,
    check_colour_distribution,
    check_cycle_mass,
    check_giant,
    check_green_law,
    check_green_tail,
    check_kernel_uniqueness,
    check_scaling,
    check_star_separation,
    check_star_separation_probability,
    cycle_mass_bound,
)
from .config import MEASUREMENTS, ConfigError, ExperimentConfig, InfeasibleCell, load_config
from .fitting import DegenerateGrid, Fit, doubling_ratios, fit_log_squared, fit_power, gnuplot_script
from .runner import COLUMNS, SCHEMA_VERSION, ResultTable, measure_replicate, run_experiment, sample_replicate

__all__ = [
    "CHECKS", "PASS", "FAIL", "NOT_APPLICABLE", "CheckResult",
    "check_colour_distribution", "check_cycle_mass", "check_giant", "check_green_law",
    "check_green_tail", "check_kernel_uniqueness", "check_scaling", "check_star_separation",
    "check_star_separation_probability", "cycle_mass_bound",
    "MEASUREMENTS", "ConfigError", "ExperimentConfig", "InfeasibleCell", "load_config",
    "DegenerateGrid", "Fit", "doubling_ratios", "fit_log_squared", "fit_power", "gnuplot_script",
    "COLUMNS", "SCHEMA_VERSION", "ResultTable", "measure_replicate", "run_experiment", "sample_replicate",
]
