"""One complete protocol run: offsets, schedule, rounds, estimation."""

from __future__ import annotations

import structlog

from ..config import ExperimentConfig
from ..estimation.accumulator import FringeAccumulator
from ..estimation.adjustment import (
    AdjustmentReport,
    estimate_dicke_offsets,
    estimate_ghz_adjustments,
    estimate_pairs_offsets,
    recenter_to_standard_clock,
)
from ..protocol.ensemble import ClockEnsemble
from ..protocol.kinds import ProtocolKind
from ..protocol.rounds import RoundBatch, simulate, simulate_ghz
from ..protocol.schedule import make_schedule
from ..protocol.sequences import enumerate_sequences
from ..seeding import derive_rng

log = structlog.get_logger(__name__)


def trial_ensemble(config: ExperimentConfig, trial_index: int) -> ClockEnsemble:
    """Explicit offsets, or a fresh uniform draw from the trial's own stream."""
    if config.offsets is not None:
        return ClockEnsemble(config.n, config.omega, tuple(config.offsets))
    rng = derive_rng(config.seed, trial_index, 0)
    return ClockEnsemble.random(config.n, config.omega, config.offset_spread, rng)


def simulate_trial(config: ExperimentConfig, trial_index: int) -> tuple[ClockEnsemble, RoundBatch]:
    ensemble = trial_ensemble(config, trial_index)
    rng = derive_rng(config.seed, trial_index, 1)
    schedule = make_schedule(
        config.n,
        config.k,
        config.schedule_mode,
        config.quadrature_policy,
        rng,
        num_sequences=config.num_sequences,
        nominal_time=config.nominal_time,
    )
    if config.protocol is ProtocolKind.GHZ:
        sequences = enumerate_sequences(config.n, config.sequence_cap)
        batch = simulate_ghz(ensemble, schedule, rng, sequences)
    else:
        batch = simulate(
            config.protocol,
            ensemble,
            schedule,
            rng,
            dicke_sampler=config.dicke_sampler,
            limit=config.statevector_limit,
        )
    return ensemble, batch


def estimate_report(
    config: ExperimentConfig, ensemble: ClockEnsemble, acc: FringeAccumulator
) -> AdjustmentReport:
    if config.protocol is ProtocolKind.GHZ:
        report = estimate_ghz_adjustments(
            acc,
            config.omega,
            config.estimator_mode,
            true_adjustments=list(ensemble.true_adjustments()),
        )
    elif config.protocol is ProtocolKind.PAIRS:
        report = estimate_pairs_offsets(
            acc, config.omega, config.estimator_mode, true_offsets=ensemble.true_offsets
        )
    else:
        report = estimate_dicke_offsets(
            acc, config.omega, config.estimator_mode, true_offsets=ensemble.true_offsets
        )
    if config.standard_party is not None:
        report = recenter_to_standard_clock(report, config.standard_party)
    return report


def run_trial(config: ExperimentConfig, trial_index: int) -> AdjustmentReport:
    """Run trial ``trial_index``; the result depends only on the config and the index."""
    ensemble, batch = simulate_trial(config, trial_index)
    acc = FringeAccumulator.from_batch(batch)
    report = estimate_report(config, ensemble, acc)
    log.debug(
        "trial_complete",
        trial=trial_index,
        protocol=config.protocol.value,
        n=config.n,
        clamped=report.clamp_count,
    )
    return report
