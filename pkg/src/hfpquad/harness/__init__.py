"""Experiment harness and command-line interface."""

from .config import ConfigError, ExperimentConfig, load_config, preset
from .experiments import ResultRow, read_csv_rows, reevaluate, run_experiment

__all__ = ["ConfigError", "ExperimentConfig", "load_config", "preset",
           "ResultRow", "read_csv_rows", "reevaluate", "run_experiment"]
