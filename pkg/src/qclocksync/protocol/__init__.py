"""Distribution sequences, scheduling, protocol rounds and the broadcast log."""

from .ensemble import ClockEnsemble, exact_time_differences
from .kinds import ProtocolKind, Quadrature, round_qubit_cost
from .rounds import (
    DickeSampler,
    MeasurementRecord,
    PairRecord,
    RoundBatch,
    run_round_dicke,
    run_round_ghz,
    run_round_pairs,
    simulate,
    simulate_dicke,
    simulate_ghz,
    simulate_pairs,
)
from .schedule import QuadraturePolicy, Schedule, ScheduledRound, ScheduleMode, make_schedule
from .sequences import DistributionSequence, enumerate_sequences, sequence_count
from .broadcast import BroadcastLog, replay

__all__ = [
    "BroadcastLog",
    "ClockEnsemble",
    "DickeSampler",
    "DistributionSequence",
    "MeasurementRecord",
    "PairRecord",
    "ProtocolKind",
    "Quadrature",
    "QuadraturePolicy",
    "RoundBatch",
    "Schedule",
    "ScheduleMode",
    "ScheduledRound",
    "enumerate_sequences",
    "exact_time_differences",
    "make_schedule",
    "replay",
    "round_qubit_cost",
    "run_round_dicke",
    "run_round_ghz",
    "run_round_pairs",
    "sequence_count",
    "simulate",
    "simulate_dicke",
    "simulate_ghz",
    "simulate_pairs",
]
