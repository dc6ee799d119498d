"""Experiment harness, CSV output and command-line interface."""
from ..fit import SlopeFit, fit_loglog_slope
from .experiments import (
    PRESETS,
    ExperimentRecord,
    ExperimentSpec,
    decay_fit,
    preset,
    run_cs_experiment,
    run_experiment,
    run_frame_experiment,
    sample_sparse_signal,
    sample_unit_ball,
)
from .io import read_csv, write_csv, write_plot_data

__all__ = [
    "ExperimentRecord",
    "ExperimentSpec",
    "PRESETS",
    "SlopeFit",
    "decay_fit",
    "fit_loglog_slope",
    "preset",
    "read_csv",
    "run_cs_experiment",
    "run_experiment",
    "run_frame_experiment",
    "sample_sparse_signal",
    "sample_unit_ball",
    "write_csv",
    "write_plot_data",
]
