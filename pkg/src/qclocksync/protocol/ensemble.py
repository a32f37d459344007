from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from ..errors import InvalidEnsembleError
from .sequences import DistributionSequence


@dataclass(frozen=True)
class ClockEnsemble:
    """N clocks ticking at angular frequency ``omega`` with hidden offsets t_i.

    Only the protocol layer reads ``true_offsets``; estimators see outcomes only.
    """

    n: int
    omega: float
    true_offsets: tuple[float, ...]

    def __post_init__(self) -> None:
        if self.n < 2 or self.n % 2:
            raise InvalidEnsembleError(f"N must be even and at least 2, got {self.n}")
        if not self.omega > 0:
            raise InvalidEnsembleError(f"omega must be positive, got {self.omega}")
        offsets = tuple(float(t) for t in self.true_offsets)
        if len(offsets) != self.n:
            raise InvalidEnsembleError(f"expected {self.n} offsets, got {len(offsets)}")
        object.__setattr__(self, "true_offsets", offsets)

    @classmethod
    def random(
        cls, n: int, omega: float, spread: float, rng: np.random.Generator
    ) -> ClockEnsemble:
        """Offsets uniform in [-spread/omega, spread/omega]; ``spread`` is omega*Delta_max."""
        offsets = rng.uniform(-spread, spread, size=n) / omega
        return cls(n, omega, tuple(offsets))

    def offsets(self) -> np.ndarray:
        return np.asarray(self.true_offsets, dtype=float)

    def true_adjustments(self) -> np.ndarray:
        """t_i - <t>."""
        t = self.offsets()
        return t - t.mean()

    def relative_offsets(self, reference: int = 0) -> np.ndarray:
        """t_i - t_reference."""
        t = self.offsets()
        return t - t[reference]

    def phases(self, nominal_time: float = 0.0) -> np.ndarray:
        """omega * (tau_0 + t_i), the unshifted measurement angles."""
        return self.omega * (nominal_time + self.offsets())


def exact_time_differences(
    ensemble: ClockEnsemble, sequences: Sequence[DistributionSequence]
) -> np.ndarray:
    """Noiseless T_j = sum_i (-1)^f_i(j) t_i."""
    t = ensemble.offsets()
    return np.array([float(np.dot(s.signs(), t)) for s in sequences])
