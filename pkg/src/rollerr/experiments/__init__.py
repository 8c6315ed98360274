"""Experiment orchestration: configs, presets, sweeps, plots, reports."""

from .config import CellParams, ConfigError, SweepConfig, load_config, parse_config_text
from .presets import PRESETS, get_preset
from .report import build_table, render_table, run_table_report
from .svgplot import PlotError, PlotSpec, emit_plot
from .sweep import RESULTS_HEADER, build_model, run_cell, run_snr_study, run_sweep

__all__ = [
    "CellParams",
    "ConfigError",
    "PRESETS",
    "PlotError",
    "PlotSpec",
    "RESULTS_HEADER",
    "SweepConfig",
    "build_model",
    "build_table",
    "emit_plot",
    "get_preset",
    "load_config",
    "parse_config_text",
    "render_table",
    "run_cell",
    "run_snr_study",
    "run_sweep",
    "run_table_report",
]
