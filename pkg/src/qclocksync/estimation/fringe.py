"""From outcome-product averages to signed time differences.

A COSINE cell estimates V cos(omega T), a SINE cell estimates -V sin(omega T)
(the quadrature shift adds pi/2 to the fringe phase).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from math import asin, atan2, cos, isfinite, sin, sqrt

from ..errors import CoverageError, InvalidEnsembleError
from ..protocol.kinds import Quadrature
from .accumulator import CellKey, FringeAccumulator


class EstimatorMode(str, Enum):
    LINEARIZED = "LINEARIZED"
    TWO_QUADRATURE = "TWO_QUADRATURE"


@dataclass(frozen=True)
class FringeEstimate:
    value: float
    stderr: float
    count: int


@dataclass(frozen=True)
class TimeDifferenceEstimate:
    """Signed phase-time T_hat of one fringe with its standard error."""

    label: int
    t_hat: float
    stderr: float
    count: int
    clamped: bool = False

    def __post_init__(self) -> None:
        if self.count > 0 and not self.stderr > 0:
            raise ValueError(f"stderr must be positive for a populated cell, got {self.stderr}")


def estimate_fringe(acc: FringeAccumulator, cell: CellKey) -> FringeEstimate:
    """Sample mean of the products in ``cell`` and its binomial standard error.

    The error is floored at 1/k so a cell sitting at |E| = 1 is never exact.
    """
    c = acc.cell(cell)
    value = c.total / c.count
    stderr = max(sqrt(max(1.0 - value * value, 0.0) / c.count), 1.0 / c.count)
    return FringeEstimate(value, stderr, c.count)


def _clamp(x: float) -> tuple[float, bool]:
    if x > 1.0:
        return 1.0, True
    if x < -1.0:
        return -1.0, True
    return x, False


def invert_phase(
    sin_cell: FringeEstimate | None,
    cos_cell: FringeEstimate | None = None,
    *,
    visibility: float = 1.0,
    omega: float = 1.0,
    mode: EstimatorMode = EstimatorMode.LINEARIZED,
    label: int = 0,
) -> TimeDifferenceEstimate:
    """Recover T from the fringe cells.

    LINEARIZED uses the SINE cell only and is unambiguous for |omega T| < pi/2;
    TWO_QUADRATURE combines both cells with atan2 and is unambiguous for |omega T| < pi.
    """
    if not 0 < visibility <= 1:
        raise InvalidEnsembleError(f"visibility must lie in (0, 1], got {visibility}")
    if sin_cell is None:
        raise CoverageError(f"{mode.value} inversion of fringe {label} needs a SINE cell")

    s_raw = sin_cell.value / visibility
    if mode is EstimatorMode.LINEARIZED:
        s, clamped = _clamp(s_raw)
        t_hat = -asin(s) / omega
        # floor keeps a saturated cell finite
        slope = sqrt(max(1.0 - s * s, 1.0 / sin_cell.count))
        stderr = sin_cell.stderr / (visibility * omega * slope)
        return TimeDifferenceEstimate(label, t_hat, stderr, sin_cell.count, clamped)

    if cos_cell is None:
        raise CoverageError(f"TWO_QUADRATURE inversion of fringe {label} needs a COSINE cell")
    c_raw = cos_cell.value / visibility
    s, s_clamped = _clamp(s_raw)
    c, c_clamped = _clamp(c_raw)
    phase = atan2(-s, c)
    radius2 = max(s * s + c * c, 1.0 / (sin_cell.count + cos_cell.count))
    sigma_s = sin_cell.stderr / visibility
    sigma_c = cos_cell.stderr / visibility
    variance = (c * c * sigma_s**2 + s * s * sigma_c**2) / radius2**2
    stderr = sqrt(variance) / omega
    if not (isfinite(stderr) and stderr > 0):
        stderr = max(sigma_s, sigma_c) / omega
    return TimeDifferenceEstimate(
        label, phase / omega, stderr, sin_cell.count + cos_cell.count, s_clamped or c_clamped
    )


def two_quadrature_penalty(phase: float) -> float:
    """Variance ratio 2(sin^4 + cos^4) of TWO_QUADRATURE against LINEARIZED at equal k."""
    return 2.0 * (sin(phase) ** 4 + cos(phase) ** 4)


def estimate_time_difference(
    acc: FringeAccumulator,
    label: int,
    *,
    visibility: float,
    omega: float,
    mode: EstimatorMode,
) -> TimeDifferenceEstimate:
    sin_cell = estimate_fringe(acc, (label, Quadrature.SINE))
    cos_cell = (
        estimate_fringe(acc, (label, Quadrature.COSINE))
        if mode is EstimatorMode.TWO_QUADRATURE
        else None
    )
    return invert_phase(
        sin_cell, cos_cell, visibility=visibility, omega=omega, mode=mode, label=label
    )
