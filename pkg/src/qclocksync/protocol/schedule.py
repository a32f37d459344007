"""Round scheduling: which distribution and which quadrature each round uses."""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass, field
from enum import Enum
from math import pi

import numpy as np

from ..errors import InvalidEnsembleError, ScheduleError
from .kinds import Quadrature
from .sequences import sequence_count

QUADRATURE_SHIFT = pi / 2


class ScheduleMode(str, Enum):
    ROUND_ROBIN = "ROUND_ROBIN"
    UNIFORM_RANDOM = "UNIFORM_RANDOM"


class QuadraturePolicy(str, Enum):
    COSINE_ONLY = "COSINE_ONLY"
    SINE_ONLY = "SINE_ONLY"
    ALTERNATE = "ALTERNATE"

    @property
    def quadratures(self) -> tuple[Quadrature, ...]:
        if self is QuadraturePolicy.COSINE_ONLY:
            return (Quadrature.COSINE,)
        if self is QuadraturePolicy.SINE_ONLY:
            return (Quadrature.SINE,)
        return (Quadrature.COSINE, Quadrature.SINE)


@dataclass(frozen=True)
class ScheduledRound:
    sequence_index: int
    quadrature: Quadrature
    nominal_time: float = 0.0

    @property
    def is_sine(self) -> bool:
        return self.quadrature is Quadrature.SINE


@dataclass(frozen=True, eq=False)
class Schedule:
    """Array-backed list of ScheduledRound.

    ``labels`` holds the sequence index of each round (always 0 for the pairs and
    Dicke protocols), ``sine`` flags SINE-quadrature rounds.
    """

    labels: np.ndarray
    sine: np.ndarray
    nominal_time: float = 0.0
    num_sequences: int = 1
    quadratures: tuple[Quadrature, ...] = field(default=(Quadrature.SINE,))

    def __len__(self) -> int:
        return int(self.labels.size)

    def __getitem__(self, r: int) -> ScheduledRound:
        quad = Quadrature.SINE if self.sine[r] else Quadrature.COSINE
        return ScheduledRound(int(self.labels[r]), quad, self.nominal_time)

    def __iter__(self) -> Iterator[ScheduledRound]:
        for r in range(len(self)):
            yield self[r]

    def cell_counts(self) -> dict[tuple[int, Quadrature], int]:
        counts: dict[tuple[int, Quadrature], int] = {}
        for label, sine in zip(self.labels.tolist(), self.sine.tolist(), strict=True):
            key = (label, Quadrature.SINE if sine else Quadrature.COSINE)
            counts[key] = counts.get(key, 0) + 1
        return counts


def make_schedule(
    n: int,
    k: int,
    mode: ScheduleMode = ScheduleMode.ROUND_ROBIN,
    quadrature_policy: QuadraturePolicy = QuadraturePolicy.SINE_ONLY,
    rng: np.random.Generator | None = None,
    *,
    num_sequences: int | None = None,
    nominal_time: float = 0.0,
) -> Schedule:
    """Schedule ``k`` rounds over ``num_sequences`` distributions (default C(N, N/2)).

    ROUND_ROBIN cycles through every (sequence, quadrature) cell in order and needs
    ``k`` to be a multiple of the cell count. UNIFORM_RANDOM draws each round's cell
    uniformly from ``rng``.
    """
    if n < 2 or n % 2:
        raise InvalidEnsembleError(f"N must be even and at least 2, got {n}")
    if k < 1:
        raise ScheduleError(f"k must be positive, got {k}")
    sequences = sequence_count(n) if num_sequences is None else num_sequences
    quads = quadrature_policy.quadratures
    cells = sequences * len(quads)

    if mode is ScheduleMode.ROUND_ROBIN:
        if k % cells:
            raise ScheduleError(
                f"ROUND_ROBIN needs k to be a multiple of {cells} "
                f"({sequences} sequences x {len(quads)} quadratures); got k={k}"
            )
        cell = np.arange(k) % cells
    else:
        if rng is None:
            raise ScheduleError("UNIFORM_RANDOM scheduling needs a random generator")
        cell = rng.integers(cells, size=k)

    labels = (cell // len(quads)).astype(np.int64)
    sine = np.array([quads[c % len(quads)] is Quadrature.SINE for c in range(cells)])[cell]
    return Schedule(labels, sine, float(nominal_time), sequences, quads)


def quadrature_shift(quadrature: Quadrature) -> float:
    return QUADRATURE_SHIFT if quadrature is Quadrature.SINE else 0.0
