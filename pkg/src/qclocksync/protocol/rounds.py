"""Protocol rounds: parties measure X at their local clock readings.

Single-round functions mirror the protocol step by step. The ``simulate_*``
functions draw a whole schedule at once with the same distributions and are what the
Monte Carlo harness uses.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..errors import CapacityError, DimensionError, InvalidEnsembleError, RecordFormatError
from ..quantum import (
    DEFAULT_STATEVECTOR_LIMIT,
    MeasurementAngles,
    OutcomeString,
    build_dicke_state,
    build_ghz_state,
    dicke_visibility,
    sample_bell_pair_outcomes,
    sample_ghz_closed_form,
    sample_outcome,
    sample_outcomes,
)
from ..quantum.samplers import draw_parities, parity_strings, sample_correlated_pairs
from .ensemble import ClockEnsemble
from .kinds import ProtocolKind, Quadrature, round_qubit_cost
from .schedule import QUADRATURE_SHIFT, Schedule, ScheduledRound, quadrature_shift
from .sequences import DistributionSequence, enumerate_sequences, sign_matrix


class DickeSampler(str, Enum):
    AUTO = "AUTO"
    STATEVECTOR = "STATEVECTOR"
    MARGINAL = "MARGINAL"


@dataclass(frozen=True)
class MeasurementRecord:
    """Outcomes of all N parties for one GHZ or Dicke round."""

    round: ScheduledRound
    outcomes: OutcomeString
    product: int
    round_index: int = 0

    def __post_init__(self) -> None:
        if self.product != self.outcomes.parity:
            raise RecordFormatError(
                f"round {self.round_index}: recorded product {self.product} "
                f"does not match outcomes {self.outcomes.outcomes}"
            )

    @classmethod
    def from_outcomes(
        cls, round: ScheduledRound, outcomes: OutcomeString, round_index: int = 0
    ) -> MeasurementRecord:
        return cls(round, outcomes, outcomes.parity, round_index)

    def pair_products(self) -> list[int]:
        """x_0 * x_i for every non-central party i."""
        x = self.outcomes.outcomes
        return [x[0] * xi for xi in x[1:]]


@dataclass(frozen=True)
class PairRecord:
    """One Bell pair shared between the central clock (party 0) and ``party_index``."""

    round: ScheduledRound
    party_index: int
    x_party: int
    x_central: int
    round_index: int = 0
    qubits: int = 2

    def __post_init__(self) -> None:
        if self.x_party not in (1, -1) or self.x_central not in (1, -1):
            raise RecordFormatError(
                f"round {self.round_index}: pair outcomes must be +1/-1, "
                f"got ({self.x_party}, {self.x_central})"
            )

    @property
    def product(self) -> int:
        return self.x_party * self.x_central


def _check_round(ensemble: ClockEnsemble, sequence: DistributionSequence) -> None:
    if sequence.n != ensemble.n:
        raise DimensionError(f"sequence of length {sequence.n} for {ensemble.n} parties")


def ghz_angles(
    ensemble: ClockEnsemble, sequence: DistributionSequence, round: ScheduledRound
) -> MeasurementAngles:
    shifts = np.zeros(ensemble.n)
    shifts[sequence.designated_party] = quadrature_shift(round.quadrature)
    return MeasurementAngles(tuple(ensemble.phases(round.nominal_time) + shifts))


def run_round_ghz(
    ensemble: ClockEnsemble,
    round: ScheduledRound,
    rng: np.random.Generator,
    *,
    use_statevector: bool = False,
    limit: int = DEFAULT_STATEVECTOR_LIMIT,
    round_index: int = 0,
) -> MeasurementRecord:
    sequences = enumerate_sequences(ensemble.n)
    if not 0 <= round.sequence_index < len(sequences):
        raise DimensionError(
            f"sequence index {round.sequence_index} out of range for N={ensemble.n} "
            f"({len(sequences)} sequences)"
        )
    sequence = sequences[round.sequence_index]
    _check_round(ensemble, sequence)
    angles = ghz_angles(ensemble, sequence, round)
    if use_statevector:
        outcomes = sample_outcome(build_ghz_state(sequence, limit), angles, rng)
    else:
        outcomes = sample_ghz_closed_form(sequence, angles, rng)
    return MeasurementRecord.from_outcomes(round, outcomes, round_index)


def run_round_pairs(
    ensemble: ClockEnsemble,
    party_index: int,
    round: ScheduledRound,
    rng: np.random.Generator,
    *,
    round_index: int = 0,
) -> PairRecord:
    if not 1 <= party_index < ensemble.n:
        raise InvalidEnsembleError(
            f"party_index must be in 1..{ensemble.n - 1} (party 0 is the central clock), "
            f"got {party_index}"
        )
    theta = ensemble.phases(round.nominal_time)
    x_p, x_c = sample_bell_pair_outcomes(
        theta[party_index] + quadrature_shift(round.quadrature), theta[0], rng
    )
    return PairRecord(round, party_index, x_p, x_c, round_index)


def _use_dicke_statevector(n: int, sampler: DickeSampler, limit: int) -> bool:
    if sampler is DickeSampler.MARGINAL:
        return False
    if n <= limit:
        return True
    if sampler is DickeSampler.STATEVECTOR:
        raise CapacityError(
            f"Dicke statevector sampling of N={n} exceeds the statevector limit of {limit}; "
            "set dicke_sampler to AUTO or MARGINAL, or lower N"
        )
    return False


def dicke_angles(ensemble: ClockEnsemble, quadrature: Quadrature, nominal_time: float) -> np.ndarray:
    theta = ensemble.phases(nominal_time)
    theta[1:] += quadrature_shift(quadrature)
    return theta


def run_round_dicke(
    ensemble: ClockEnsemble,
    round: ScheduledRound,
    rng: np.random.Generator,
    *,
    sampler: DickeSampler = DickeSampler.AUTO,
    limit: int = DEFAULT_STATEVECTOR_LIMIT,
    round_index: int = 0,
) -> MeasurementRecord:
    """One Dicke round; only ``pair_products()`` of the result is physically meaningful
    when the marginal sampler is used."""
    theta = dicke_angles(ensemble, round.quadrature, round.nominal_time)
    if _use_dicke_statevector(ensemble.n, sampler, limit):
        outcomes = sample_outcome(build_dicke_state(ensemble.n, limit), MeasurementAngles(tuple(theta)), rng)
    else:
        row = _dicke_marginal_rows(np.array([theta]), ensemble.n, rng)[0]
        outcomes = OutcomeString(tuple(row))
    return MeasurementRecord.from_outcomes(round, outcomes, round_index)


def _dicke_marginal_rows(thetas: np.ndarray, n: int, rng: np.random.Generator) -> np.ndarray:
    """Central outcome uniform, each party agreeing with it with probability (1 + V cos)/2, V = N/(2(N-1))."""
    rounds = thetas.shape[0]
    corr = dicke_visibility(n) * np.cos(thetas[:, 1:] - thetas[:, :1])
    x_c = rng.choice(np.array([1, -1], dtype=np.int8), size=(rounds, 1))
    agree = rng.random(corr.shape) < 0.5 * (1.0 + corr)
    parties = np.where(agree, x_c, -x_c).astype(np.int8)
    return np.concatenate([x_c, parties], axis=1)


@dataclass(frozen=True, eq=False)
class RoundBatch:
    """Outcomes of a whole schedule.

    ``outcomes`` is (k, N) for GHZ and DICKE, and (k, N-1, 2) for PAIRS where the
    last axis is (party qubit, central qubit).
    """

    protocol: ProtocolKind
    n: int
    schedule: Schedule
    outcomes: np.ndarray

    def __len__(self) -> int:
        return len(self.schedule)

    @property
    def qubits_consumed(self) -> int:
        return len(self) * round_qubit_cost(self.protocol, self.n)

    def products(self) -> np.ndarray:
        """Fringe products: (k,) for GHZ, (k, N-1) central-party products otherwise."""
        x = self.outcomes.astype(np.int64)
        if self.protocol is ProtocolKind.GHZ:
            return np.prod(x, axis=1)
        if self.protocol is ProtocolKind.PAIRS:
            return x[..., 0] * x[..., 1]
        return x[:, 1:] * x[:, :1]

    def records(self) -> list[MeasurementRecord] | list[PairRecord]:
        if self.protocol is ProtocolKind.PAIRS:
            pairs: list[PairRecord] = []
            for r, rnd in enumerate(self.schedule):
                for i in range(1, self.n):
                    x_p, x_c = self.outcomes[r, i - 1]
                    pairs.append(PairRecord(rnd, i, int(x_p), int(x_c), r))
            return pairs
        return [
            MeasurementRecord.from_outcomes(rnd, OutcomeString(tuple(self.outcomes[r])), r)
            for r, rnd in enumerate(self.schedule)
        ]


def simulate_ghz(
    ensemble: ClockEnsemble,
    schedule: Schedule,
    rng: np.random.Generator,
    sequences: list[DistributionSequence] | None = None,
) -> RoundBatch:
    seqs = enumerate_sequences(ensemble.n) if sequences is None else sequences
    fringe = sign_matrix(seqs) @ ensemble.phases(schedule.nominal_time)
    # the designated party is unflipped, so its shift enters phi with sign +1
    phases = fringe[schedule.labels] + QUADRATURE_SHIFT * schedule.sine
    outcomes = parity_strings(draw_parities(phases, rng), ensemble.n, rng)
    return RoundBatch(ProtocolKind.GHZ, ensemble.n, schedule, outcomes)


def simulate_pairs(
    ensemble: ClockEnsemble, schedule: Schedule, rng: np.random.Generator
) -> RoundBatch:
    theta = ensemble.phases(schedule.nominal_time)
    delta = theta[None, 1:] + QUADRATURE_SHIFT * schedule.sine[:, None] - theta[0]
    x_c, x_p = sample_correlated_pairs(np.cos(delta), rng)
    outcomes = np.stack([x_p, x_c], axis=-1).astype(np.int8)
    return RoundBatch(ProtocolKind.PAIRS, ensemble.n, schedule, outcomes)


def simulate_dicke(
    ensemble: ClockEnsemble,
    schedule: Schedule,
    rng: np.random.Generator,
    *,
    sampler: DickeSampler = DickeSampler.AUTO,
    limit: int = DEFAULT_STATEVECTOR_LIMIT,
) -> RoundBatch:
    n = ensemble.n
    k = len(schedule)
    if _use_dicke_statevector(n, sampler, limit):
        state = build_dicke_state(n, limit)
        outcomes = np.empty((k, n), dtype=np.int8)
        for quad, mask in ((Quadrature.COSINE, ~schedule.sine), (Quadrature.SINE, schedule.sine)):
            count = int(mask.sum())
            if count:
                angles = MeasurementAngles(tuple(dicke_angles(ensemble, quad, schedule.nominal_time)))
                outcomes[mask] = sample_outcomes(state, angles, count, rng)
    else:
        thetas = np.tile(ensemble.phases(schedule.nominal_time), (k, 1))
        thetas[:, 1:] += QUADRATURE_SHIFT * schedule.sine[:, None]
        outcomes = _dicke_marginal_rows(thetas, n, rng)
    return RoundBatch(ProtocolKind.DICKE, n, schedule, outcomes)


def simulate(
    protocol: ProtocolKind,
    ensemble: ClockEnsemble,
    schedule: Schedule,
    rng: np.random.Generator,
    *,
    dicke_sampler: DickeSampler = DickeSampler.AUTO,
    limit: int = DEFAULT_STATEVECTOR_LIMIT,
) -> RoundBatch:
    if protocol is ProtocolKind.GHZ:
        return simulate_ghz(ensemble, schedule, rng)
    if protocol is ProtocolKind.PAIRS:
        return simulate_pairs(ensemble, schedule, rng)
    return simulate_dicke(ensemble, schedule, rng, sampler=dicke_sampler, limit=limit)
