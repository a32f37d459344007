"""Analytic precision and qubit-efficiency predictions for the three protocols."""

from __future__ import annotations

from collections.abc import Sequence
from math import asin, pi, sqrt

import numpy as np

from ..errors import InvalidEnsembleError, ScheduleError
from ..protocol.kinds import ProtocolKind, round_qubit_cost
from ..quantum.samplers import dicke_visibility
from .fringe import EstimatorMode


def fringe_visibility(protocol: ProtocolKind, n: int) -> float:
    return dicke_visibility(n) if protocol is ProtocolKind.DICKE else 1.0


def analytic_dt(protocol: ProtocolKind, n: int, k: int, omega: float = 1.0) -> float:
    """Per-party adjustment error after ``k`` rounds measured at the fringe zero crossing."""
    if k < 1:
        raise ScheduleError(f"k must be positive, got {k}")
    base = 1.0 / (omega * sqrt(k))
    if protocol is ProtocolKind.GHZ:
        return (n - 1) / n * base
    return base / fringe_visibility(protocol, n)


def qubit_efficiency(protocol: ProtocolKind, n: int, q: int) -> float:
    """Accuracy 1/(omega dt)^2 reached with ``q`` qubits in total."""
    cost = round_qubit_cost(protocol, n)
    if q < cost or q % cost:
        raise ScheduleError(
            f"Q={q} is not a whole number of {protocol.value} rounds of {cost} qubits at N={n}"
        )
    gain = n / (n - 1)
    per_party = q / n
    if protocol is ProtocolKind.GHZ:
        return gain**2 * per_party
    if protocol is ProtocolKind.PAIRS:
        return 0.5 * gain * per_party
    return 0.25 * gain**2 * per_party


def linearized_window(
    protocol: ProtocolKind, n: int, mode: EstimatorMode = EstimatorMode.LINEARIZED
) -> float:
    """Largest offset spread omega*Delta_max keeping every fringe phase unambiguous.

    GHZ phases sum N offsets; pairs and Dicke phases are differences of two.
    """
    if mode is EstimatorMode.TWO_QUADRATURE:
        return pi / n if protocol is ProtocolKind.GHZ else pi / 2
    if protocol is ProtocolKind.GHZ:
        return pi / (2 * n)
    if protocol is ProtocolKind.PAIRS:
        return pi / 4
    return asin(dicke_visibility(n)) / 2


def max_fringe_phase(protocol: ProtocolKind, omega: float, offsets: Sequence[float]) -> float:
    """Largest |phase| any fringe of the protocol sees for explicit offsets."""
    t = omega * np.asarray(offsets, dtype=float)
    if protocol is ProtocolKind.GHZ:
        ordered = np.sort(t)
        half = t.size // 2
        return float(ordered[half:].sum() - ordered[:half].sum())
    return float(np.max(np.abs(t[1:] - t[0]))) if t.size > 1 else 0.0


def offsets_within_window(
    protocol: ProtocolKind, omega: float, offsets: Sequence[float], mode: EstimatorMode
) -> bool:
    n = len(offsets)
    if n < 2:
        raise InvalidEnsembleError("need at least two offsets")
    phase = max_fringe_phase(protocol, omega, offsets)
    if mode is EstimatorMode.TWO_QUADRATURE:
        return phase < pi
    if protocol is ProtocolKind.DICKE:
        return phase < asin(dicke_visibility(n))
    return phase < pi / 2
