"""Seeded experiment harness, reports and command-line interface."""

from .experiment import (AggregateRow, ExperimentSpec, SolverEntry, TrialRecord,
                         aggregate, mean_residual_trace, residual_trace,
                         run_experiment, trial_seed)
from .presets import PRESETS, preset
from .report import emit_report, read_aggregates_csv, read_json_report, read_trials_csv
from .solvers import SOLVERS
