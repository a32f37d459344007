"""Entangled energy-eigenstates used by the synchronization protocols.

Basis index convention: qubit 0 is the most significant bit, so the bitstring
``b_0 b_1 ... b_{N-1}`` lives at index ``sum(b_i << (N - 1 - i))``.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from itertools import combinations
from math import sqrt

import numpy as np
from scipy.special import comb

from ..errors import CapacityError, InvalidEnsembleError

DEFAULT_STATEVECTOR_LIMIT = 16
NORM_TOLERANCE = 1e-9


@dataclass(frozen=True)
class PureState:
    """Normalized amplitude vector over ``num_qubits`` qubits."""

    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        if self.num_qubits < 1:
            raise InvalidEnsembleError(f"num_qubits must be positive, got {self.num_qubits}")
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (1 << self.num_qubits,):
            raise InvalidEnsembleError(
                f"expected {1 << self.num_qubits} amplitudes for {self.num_qubits} qubits, got {amps.shape}"
            )
        norm = float(np.sum(np.abs(amps) ** 2))
        if abs(norm - 1.0) > NORM_TOLERANCE:
            raise InvalidEnsembleError(f"state is not normalized (squared norm {norm!r})")
        amps = amps.copy()
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dimension(self) -> int:
        return 1 << self.num_qubits

    def squared_norm(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def hamming_weights(self) -> np.ndarray:
        """Excitation number of every basis index."""
        return basis_weights(self.num_qubits)


def basis_weights(num_qubits: int) -> np.ndarray:
    idx = np.arange(1 << num_qubits)
    weights = np.zeros(idx.shape, dtype=np.int64)
    for q in range(num_qubits):
        weights += (idx >> q) & 1
    return weights


def bits_to_index(bits: Sequence[int]) -> int:
    index = 0
    for b in bits:
        index = (index << 1) | (int(b) & 1)
    return index


def check_capacity(num_qubits: int, limit: int = DEFAULT_STATEVECTOR_LIMIT) -> None:
    if num_qubits > limit:
        raise CapacityError(
            f"{num_qubits} qubits exceeds the statevector limit of {limit}; "
            "use the closed-form GHZ sampler or the Dicke pair-marginal sampler instead"
        )


def _check_even(n: int) -> None:
    if n < 2 or n % 2:
        raise InvalidEnsembleError(f"N must be even and at least 2, got {n}")


def build_ghz_state(flags: Sequence[int], limit: int = DEFAULT_STATEVECTOR_LIMIT) -> PureState:
    """(|f> + |not f>)/sqrt(2) for a balanced flip assignment ``flags``.

    ``flags`` may be a ``DistributionSequence`` or any sequence of bits.
    """
    bits = [int(b) for b in flags]
    n = len(bits)
    _check_even(n)
    if 2 * sum(bits) != n:
        raise InvalidEnsembleError(f"flags must flip exactly N/2 qubits, got {sum(bits)} of {n}")
    check_capacity(n, limit)
    amps = np.zeros(1 << n, dtype=np.complex128)
    amps[bits_to_index(bits)] = 1 / sqrt(2)
    amps[bits_to_index([1 - b for b in bits])] = 1 / sqrt(2)
    return PureState(n, amps)


def build_bell_pair() -> PureState:
    """(|01> + |10>)/sqrt(2), one factor of the parallel-distribution state."""
    return build_ghz_state((0, 1))


def build_dicke_state(n: int, limit: int = DEFAULT_STATEVECTOR_LIMIT) -> PureState:
    """Equal superposition of all basis states with n/2 excitations."""
    _check_even(n)
    check_capacity(n, limit)
    amps = np.zeros(1 << n, dtype=np.complex128)
    amp = 1 / sqrt(comb(n, n // 2, exact=True))
    for ones in combinations(range(n), n // 2):
        amps[sum(1 << (n - 1 - q) for q in ones)] = amp
    return PureState(n, amps)


def build_product_plus_state(n: int, limit: int = DEFAULT_STATEVECTOR_LIMIT) -> PureState:
    """|+>^n, the +1 eigenstate of every X(0) measurement."""
    check_capacity(n, limit)
    amps = np.full(1 << n, 1 / sqrt(1 << n), dtype=np.complex128)
    return PureState(n, amps)


def evolve_free(state: PureState, tau_phase: float) -> PureState:
    """Free evolution for a delay of phase ``tau_phase`` (= omega * delay).

    Each weight-w amplitude picks up exp(-i w tau); energy eigenstates only get a
    global phase.
    """
    phases = np.exp(-1j * tau_phase * state.hamming_weights())
    return PureState(state.num_qubits, state.amplitudes * phases)
