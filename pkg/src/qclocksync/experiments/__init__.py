"""Trials, Monte Carlo statistics, efficiency sweeps and sampler validation."""

from .monte_carlo import PartySummary, TrialSummary, monte_carlo, run_trials, summarize
from .output import (
    write_efficiency_csv,
    write_json,
    write_results_csv,
    write_summary_text,
    write_validation_csv,
)
from .sweep import SweepRow, SweepTable, efficiency_sweep
from .trial import run_trial, simulate_trial
from .validation import ValidationCheck, ValidationReport, validate_samplers

__all__ = [
    "PartySummary",
    "SweepRow",
    "SweepTable",
    "TrialSummary",
    "ValidationCheck",
    "ValidationReport",
    "efficiency_sweep",
    "monte_carlo",
    "run_trial",
    "run_trials",
    "simulate_trial",
    "summarize",
    "validate_samplers",
    "write_efficiency_csv",
    "write_json",
    "write_results_csv",
    "write_summary_text",
    "write_validation_csv",
]
