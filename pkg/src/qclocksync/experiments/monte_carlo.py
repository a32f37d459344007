"""Repeated trials and their error statistics."""

from __future__ import annotations

import time
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from math import isfinite, sqrt

import numpy as np
import structlog
from pydantic import BaseModel, Field

from ..config import ExperimentConfig
from ..estimation.adjustment import REPORT_SCHEMA_VERSION, AdjustmentReport, PartyAdjustment
from ..estimation.fringe import EstimatorMode
from ..protocol.kinds import ProtocolKind
from .trial import run_trial

log = structlog.get_logger(__name__)


class PartySummary(BaseModel):
    party: int
    rms_error: float
    analytic_stderr: float
    ratio: float


class TrialSummary(BaseModel):
    schema_version: int = REPORT_SCHEMA_VERSION
    protocol: ProtocolKind
    n: int
    k: int
    q: int
    omega: float
    estimator_mode: EstimatorMode
    trials: int
    seed: int
    parties: list[PartySummary] = Field(default_factory=list)
    pooled_rms: float
    pooled_analytic: float
    pooled_ratio: float
    clamp_count: int = 0
    trials_with_clamps: int = 0
    wall_time_s: float = 0.0
    # per-trial reports feed the results CSV; summary.json omits them
    reports: list[AdjustmentReport] = Field(default_factory=list, exclude=True)


def _scored(report: AdjustmentReport) -> list[PartyAdjustment]:
    """Parties with a statistical error and a known truth (reference party excluded)."""
    return [
        p
        for p in report.estimated_parties()
        if p.party != report.reference_party and p.error is not None
    ]


def _ratio(rms: float, analytic: float) -> float:
    ratio = rms / analytic if analytic > 0 else 0.0
    return ratio if isfinite(ratio) else 0.0


def summarize(
    config: ExperimentConfig, reports: Sequence[AdjustmentReport], wall_time_s: float = 0.0
) -> TrialSummary:
    """Per-party RMS error over trials against the analytic prediction."""
    if not reports:
        raise ValueError("no trial reports to summarize")
    errors: dict[int, list[float]] = {}
    analytic: dict[int, list[float]] = {}
    for report in reports:
        for p in _scored(report):
            assert p.error is not None
            errors.setdefault(p.party, []).append(p.error)
            analytic.setdefault(p.party, []).append(p.analytic_stderr)

    parties = []
    for party in sorted(errors):
        rms = sqrt(float(np.mean(np.square(errors[party]))))
        pred = sqrt(float(np.mean(np.square(analytic[party]))))
        parties.append(PartySummary(party=party, rms_error=rms, analytic_stderr=pred, ratio=_ratio(rms, pred)))

    all_errors = np.concatenate([np.asarray(v) for v in errors.values()]) if errors else np.zeros(1)
    all_analytic = (
        np.concatenate([np.asarray(v) for v in analytic.values()]) if analytic else np.zeros(1)
    )
    pooled_rms = sqrt(float(np.mean(np.square(all_errors))))
    pooled_analytic = sqrt(float(np.mean(np.square(all_analytic))))
    first = reports[0]
    return TrialSummary(
        protocol=first.protocol,
        n=first.n,
        k=first.k,
        q=first.q,
        omega=first.omega,
        estimator_mode=first.estimator_mode,
        trials=len(reports),
        seed=config.seed,
        parties=parties,
        pooled_rms=pooled_rms,
        pooled_analytic=pooled_analytic,
        pooled_ratio=_ratio(pooled_rms, pooled_analytic),
        clamp_count=sum(r.clamp_count for r in reports),
        trials_with_clamps=sum(1 for r in reports if r.clamp_count),
        wall_time_s=wall_time_s,
        reports=list(reports),
    )


def run_trials(config: ExperimentConfig, indices: Sequence[int] | None = None) -> list[AdjustmentReport]:
    """Run trials in the given order; results come back ordered like ``indices``."""
    order = list(range(config.trials)) if indices is None else list(indices)
    if config.threads == 1:
        return [run_trial(config, i) for i in order]
    with ThreadPoolExecutor(max_workers=config.threads) as pool:
        return list(pool.map(lambda i: run_trial(config, i), order))


def monte_carlo(config: ExperimentConfig) -> TrialSummary:
    log.info(
        "monte_carlo_start",
        protocol=config.protocol.value,
        n=config.n,
        k=config.k,
        trials=config.trials,
        threads=config.threads,
    )
    start = time.perf_counter()
    reports = run_trials(config)
    summary = summarize(config, reports, time.perf_counter() - start)
    if config.trials < 30:
        log.warning("few_trials", trials=config.trials, note="RMS ratios are noisy below 30 trials")
    if summary.clamp_count:
        log.warning("clamped_estimates", count=summary.clamp_count, trials=summary.trials_with_clamps)
    log.info(
        "monte_carlo_complete",
        pooled_rms=summary.pooled_rms,
        pooled_ratio=summary.pooled_ratio,
        wall_time_s=round(summary.wall_time_s, 3),
    )
    return summary
