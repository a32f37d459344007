"""Exact statistics of simultaneous local X(t) measurements.

The outcome-x eigenstate of X(t) is (|0> + x e^{i theta}|1>)/sqrt(2) with
theta = omega * t. Outcome tables are indexed like basis states: bit value 0 means
outcome +1, bit value 1 means outcome -1, qubit 0 is the most significant bit.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from ..errors import DimensionError
from .states import PureState

PROBABILITY_TOLERANCE = 1e-9


@dataclass(frozen=True)
class MeasurementAngles:
    """Phase theta_i of the X measurement of each qubit, in radians."""

    angles: tuple[float, ...]

    def __post_init__(self) -> None:
        values = tuple(float(a) for a in self.angles)
        if not np.all(np.isfinite(values)):
            raise DimensionError("measurement angles must be finite")
        object.__setattr__(self, "angles", values)

    @classmethod
    def from_times(
        cls, omega: float, times: Iterable[float], shifts: Iterable[float] | None = None
    ) -> MeasurementAngles:
        theta = omega * np.asarray(list(times), dtype=float)
        if shifts is not None:
            theta = theta + np.asarray(list(shifts), dtype=float)
        return cls(tuple(theta))

    def __len__(self) -> int:
        return len(self.angles)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.angles, dtype=float)


@dataclass(frozen=True)
class OutcomeString:
    """One +/-1 outcome per qubit."""

    outcomes: tuple[int, ...]

    def __post_init__(self) -> None:
        values = tuple(int(x) for x in self.outcomes)
        if any(x not in (1, -1) for x in values):
            raise DimensionError(f"outcomes must be +1 or -1, got {values}")
        object.__setattr__(self, "outcomes", values)

    @classmethod
    def from_index(cls, index: int, num_qubits: int) -> OutcomeString:
        return cls(tuple(1 - 2 * ((index >> (num_qubits - 1 - q)) & 1) for q in range(num_qubits)))

    def __len__(self) -> int:
        return len(self.outcomes)

    def __getitem__(self, i: int) -> int:
        return self.outcomes[i]

    @property
    def parity(self) -> int:
        return int(np.prod(self.outcomes))

    def to_index(self) -> int:
        index = 0
        for x in self.outcomes:
            index = (index << 1) | (0 if x == 1 else 1)
        return index


def outcome_signs(num_qubits: int) -> np.ndarray:
    """(2^N, N) table of the +/-1 outcome of every qubit for every table index."""
    idx = np.arange(1 << num_qubits)[:, None]
    shifts = np.arange(num_qubits - 1, -1, -1)[None, :]
    return 1 - 2 * ((idx >> shifts) & 1)


def _check_dims(state: PureState, angles: MeasurementAngles) -> None:
    if len(angles) != state.num_qubits:
        raise DimensionError(
            f"{len(angles)} measurement angles for a {state.num_qubits}-qubit state"
        )


def outcome_distribution(state: PureState, angles: MeasurementAngles) -> np.ndarray:
    """Exact probability of every outcome string, indexed as described above."""
    _check_dims(state, angles)
    n = state.num_qubits
    psi = state.amplitudes.reshape([2] * n)
    for q, theta in enumerate(angles.angles):
        phase = np.exp(1j * theta)
        # rows: outcome +1 / -1, columns: basis 0 / 1
        bras = np.array([[1, phase], [1, -phase]], dtype=np.complex128) / np.sqrt(2)
        psi = np.moveaxis(np.tensordot(bras, psi, axes=([1], [q])), 0, q)
    probs = np.abs(psi.reshape(-1)) ** 2
    total = float(probs.sum())
    if abs(total - 1.0) > PROBABILITY_TOLERANCE:
        raise AssertionError(f"outcome probabilities sum to {total!r}")
    return probs


def product_expectation(
    state: PureState, angles: MeasurementAngles, qubits: Sequence[int] | None = None
) -> float:
    """Expectation of the product of outcomes over ``qubits`` (default: all)."""
    probs = outcome_distribution(state, angles)
    signs = outcome_signs(state.num_qubits)
    chosen = list(range(state.num_qubits)) if qubits is None else list(qubits)
    return float(np.dot(probs, np.prod(signs[:, chosen], axis=1)))


def sample_outcome(
    state: PureState, angles: MeasurementAngles, rng: np.random.Generator
) -> OutcomeString:
    probs = outcome_distribution(state, angles)
    index = int(rng.choice(probs.size, p=probs))
    return OutcomeString.from_index(index, state.num_qubits)


def sample_outcomes(
    state: PureState, angles: MeasurementAngles, size: int, rng: np.random.Generator
) -> np.ndarray:
    """``size`` independent outcome strings as a (size, N) array of +/-1."""
    probs = outcome_distribution(state, angles)
    indices = rng.choice(probs.size, size=size, p=probs)
    return outcome_signs(state.num_qubits)[indices].astype(np.int8)
