"""Sweeps, persistence, bound reports and the command-line interface."""

from .persist import load_mps, save_mps
from .report import BoundsReport, report_bounds
from .sweep import SweepConfig, SweepRow, parse_n_range, read_rows, run_sweep

__all__ = [
    "BoundsReport",
    "SweepConfig",
    "SweepRow",
    "load_mps",
    "parse_n_range",
    "read_rows",
    "report_bounds",
    "run_sweep",
    "save_mps",
]
