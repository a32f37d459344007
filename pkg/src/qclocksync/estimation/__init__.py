"""Fringe estimation, clock adjustments and analytic error predictions."""

from .accumulator import CellKey, FringeAccumulator, FringeCell
from .adjustment import (
    AdjustmentReport,
    PartyAdjustment,
    adjustment_from_estimates,
    estimate_dicke_offsets,
    estimate_ghz_adjustments,
    estimate_pairs_offsets,
    propagate_adjustment_error,
    recenter_to_standard_clock,
    sequence_contrast,
)
from .efficiency import (
    analytic_dt,
    fringe_visibility,
    linearized_window,
    offsets_within_window,
    qubit_efficiency,
)
from .fringe import (
    EstimatorMode,
    FringeEstimate,
    TimeDifferenceEstimate,
    estimate_fringe,
    estimate_time_difference,
    invert_phase,
    two_quadrature_penalty,
)

__all__ = [
    "AdjustmentReport",
    "CellKey",
    "EstimatorMode",
    "FringeAccumulator",
    "FringeCell",
    "FringeEstimate",
    "PartyAdjustment",
    "TimeDifferenceEstimate",
    "adjustment_from_estimates",
    "analytic_dt",
    "estimate_dicke_offsets",
    "estimate_fringe",
    "estimate_ghz_adjustments",
    "estimate_pairs_offsets",
    "estimate_time_difference",
    "fringe_visibility",
    "invert_phase",
    "linearized_window",
    "offsets_within_window",
    "propagate_adjustment_error",
    "qubit_efficiency",
    "recenter_to_standard_clock",
    "sequence_contrast",
    "two_quadrature_penalty",
]
