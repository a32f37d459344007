"""Per-party adjustment times and their reports.

GHZ: every party combines all fringes T_j with its own signs (-1)^f_i(j)::

    sum_j (-1)^f_i(j) T_j = C(N, N/2) (t_i - <t>_{k != i})
    t_i - <t>            = ((N-1)/N) / C(N, N/2) * sum_j (-1)^f_i(j) T_j

Pairs and Dicke: each party inverts its own fringe with the central clock and
reports t_i - t_0.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from math import sqrt

import numpy as np
from pydantic import BaseModel, Field

from ..errors import CoverageError, InvalidEnsembleError
from ..protocol.kinds import ProtocolKind, Quadrature, round_qubit_cost
from ..protocol.sequences import enumerate_sequences, sequence_count, sign_matrix
from .accumulator import FringeAccumulator
from .efficiency import fringe_visibility
from .fringe import (
    EstimatorMode,
    TimeDifferenceEstimate,
    estimate_time_difference,
    two_quadrature_penalty,
)

REPORT_SCHEMA_VERSION = 1

TimeDifferences = Sequence[TimeDifferenceEstimate] | Sequence[float] | Mapping[int, TimeDifferenceEstimate]


class PartyAdjustment(BaseModel):
    party: int
    adjustment_hat: float
    analytic_stderr: float
    estimated_stderr: float = 0.0
    true_adjustment: float | None = None

    @property
    def error(self) -> float | None:
        if self.true_adjustment is None:
            return None
        return self.adjustment_hat - self.true_adjustment


class AdjustmentReport(BaseModel):
    """Estimated clock adjustments of one protocol run.

    ``reference_party`` is None when adjustments are relative to the average time
    (GHZ convention) and the central or standard party otherwise.
    """

    schema_version: int = REPORT_SCHEMA_VERSION
    protocol: ProtocolKind
    n: int
    k: int
    q: int
    omega: float
    estimator_mode: EstimatorMode
    reference_party: int | None = None
    parties: list[PartyAdjustment] = Field(default_factory=list)
    clamp_count: int = 0
    variance_penalty: float | None = None

    def adjustments(self) -> np.ndarray:
        return np.array([p.adjustment_hat for p in self.parties])

    def party(self, index: int) -> PartyAdjustment:
        for p in self.parties:
            if p.party == index:
                return p
        raise InvalidEnsembleError(f"unknown party {index}")

    def estimated_parties(self) -> list[PartyAdjustment]:
        """Parties whose adjustment carries statistical error (excludes the reference)."""
        return [p for p in self.parties if p.analytic_stderr > 0]


def _t_values(estimates: TimeDifferences, count: int) -> np.ndarray:
    if isinstance(estimates, Mapping):
        missing = [j for j in range(count) if j not in estimates]
        if missing:
            raise CoverageError(f"no time-difference estimate for sequences {missing[:5]}")
        return np.array([estimates[j].t_hat for j in range(count)])
    if len(estimates) != count:
        raise CoverageError(f"expected {count} time-difference estimates, got {len(estimates)}")
    return np.array(
        [e.t_hat if isinstance(e, TimeDifferenceEstimate) else float(e) for e in estimates]
    )


def sequence_contrast(estimates: TimeDifferences, party: int, n: int) -> float:
    """sum_j (-1)^f_i(j) T_j for party ``party``."""
    sequences = enumerate_sequences(n)
    if not 0 <= party < n:
        raise InvalidEnsembleError(f"unknown party {party}")
    t = _t_values(estimates, len(sequences))
    return float(np.dot(sign_matrix(sequences)[:, party], t))


def adjustment_from_estimates(estimates: TimeDifferences, party: int, n: int) -> float:
    return (n - 1) / n / sequence_count(n) * sequence_contrast(estimates, party, n)


def propagate_adjustment_error(dts: Sequence[float], n: int) -> float:
    """Quadrature sum of the per-sequence errors with the adjustment coefficients."""
    weight = (n - 1) / n / sequence_count(n)
    return weight * sqrt(float(np.sum(np.square(np.asarray(dts, dtype=float)))))


def _cells_used(mode: EstimatorMode) -> tuple[Quadrature, ...]:
    if mode is EstimatorMode.LINEARIZED:
        return (Quadrature.SINE,)
    return (Quadrature.SINE, Quadrature.COSINE)


def _counts(acc: FringeAccumulator, label: int, mode: EstimatorMode) -> int:
    return sum(acc.cell((label, q)).count for q in _cells_used(mode))


def estimate_ghz_adjustments(
    acc: FringeAccumulator,
    omega: float,
    mode: EstimatorMode = EstimatorMode.LINEARIZED,
    *,
    true_adjustments: Sequence[float] | None = None,
) -> AdjustmentReport:
    n = acc.n
    sequences = enumerate_sequences(n)
    estimates = [
        estimate_time_difference(acc, s.index, visibility=1.0, omega=omega, mode=mode)
        for s in sequences
    ]
    t_hat = np.array([e.t_hat for e in estimates])
    weight = (n - 1) / n / len(sequences)
    adjustments = weight * (sign_matrix(sequences).T @ t_hat)

    analytic = propagate_adjustment_error(
        [1.0 / (omega * sqrt(_counts(acc, s.index, mode))) for s in sequences], n
    )
    estimated = propagate_adjustment_error([e.stderr for e in estimates], n)
    penalty = None
    if mode is EstimatorMode.TWO_QUADRATURE:
        penalty = float(np.mean([two_quadrature_penalty(omega * t) for t in t_hat]))

    parties = [
        PartyAdjustment(
            party=i,
            adjustment_hat=float(adjustments[i]),
            analytic_stderr=analytic,
            estimated_stderr=estimated,
            true_adjustment=None if true_adjustments is None else float(true_adjustments[i]),
        )
        for i in range(n)
    ]
    k = acc.total_rounds()
    return AdjustmentReport(
        protocol=ProtocolKind.GHZ,
        n=n,
        k=k,
        q=k * n,
        omega=omega,
        estimator_mode=mode,
        reference_party=None,
        parties=parties,
        clamp_count=sum(e.clamped for e in estimates),
        variance_penalty=penalty,
    )


def _central_clock_report(
    acc: FringeAccumulator,
    omega: float,
    mode: EstimatorMode,
    true_offsets: Sequence[float] | None,
) -> AdjustmentReport:
    n = acc.n
    visibility = fringe_visibility(acc.protocol, n)
    parties = [
        PartyAdjustment(
            party=0,
            adjustment_hat=0.0,
            analytic_stderr=0.0,
            true_adjustment=None if true_offsets is None else 0.0,
        )
    ]
    clamps = 0
    penalties = []
    for i in range(1, n):
        est = estimate_time_difference(acc, i, visibility=visibility, omega=omega, mode=mode)
        clamps += est.clamped
        if mode is EstimatorMode.TWO_QUADRATURE:
            penalties.append(two_quadrature_penalty(omega * est.t_hat))
        parties.append(
            PartyAdjustment(
                party=i,
                adjustment_hat=est.t_hat,
                analytic_stderr=1.0 / (visibility * omega * sqrt(_counts(acc, i, mode))),
                estimated_stderr=est.stderr,
                true_adjustment=None if true_offsets is None else float(true_offsets[i] - true_offsets[0]),
            )
        )
    k = acc.total_rounds()
    return AdjustmentReport(
        protocol=acc.protocol,
        n=n,
        k=k,
        q=k * round_qubit_cost(acc.protocol, n),
        omega=omega,
        estimator_mode=mode,
        reference_party=0,
        parties=parties,
        clamp_count=clamps,
        variance_penalty=float(np.mean(penalties)) if penalties else None,
    )


def estimate_pairs_offsets(
    acc: FringeAccumulator,
    omega: float,
    mode: EstimatorMode = EstimatorMode.LINEARIZED,
    *,
    true_offsets: Sequence[float] | None = None,
) -> AdjustmentReport:
    """Offsets t_i - t_0 from the Bell-pair fringes (visibility 1)."""
    if acc.protocol is not ProtocolKind.PAIRS:
        raise InvalidEnsembleError(f"expected a PAIRS accumulator, got {acc.protocol.value}")
    return _central_clock_report(acc, omega, mode, true_offsets)


def estimate_dicke_offsets(
    acc: FringeAccumulator,
    omega: float,
    mode: EstimatorMode = EstimatorMode.LINEARIZED,
    *,
    true_offsets: Sequence[float] | None = None,
) -> AdjustmentReport:
    """Offsets t_i - t_0 from the Dicke pair fringes (visibility N/(2(N-1)))."""
    if acc.protocol is not ProtocolKind.DICKE:
        raise InvalidEnsembleError(f"expected a DICKE accumulator, got {acc.protocol.value}")
    return _central_clock_report(acc, omega, mode, true_offsets)


def recenter_to_standard_clock(report: AdjustmentReport, standard_party: int) -> AdjustmentReport:
    """Shift adjustments so ``standard_party`` keeps its time and everyone else follows it."""
    standard = report.party(standard_party)
    shift = standard.adjustment_hat
    true_shift = standard.true_adjustment
    parties = [
        p.model_copy(
            update={
                "adjustment_hat": p.adjustment_hat - shift,
                "true_adjustment": (
                    None
                    if p.true_adjustment is None or true_shift is None
                    else p.true_adjustment - true_shift
                ),
            }
        )
        for p in report.parties
    ]
    return report.model_copy(update={"parties": parties, "reference_party": standard_party})
