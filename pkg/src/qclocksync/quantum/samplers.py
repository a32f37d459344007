"""Closed-form samplers that avoid the 2^N statevector.

The GHZ-type state only has two nonzero amplitudes, so its outcome law factorizes
into a parity draw followed by a uniform string of that parity:

    P(x) = 2^-N (1 + prod(x) cos(phi)),   phi = sum_i (-1)^f_i theta_i

Pairs of qubits from the Bell pair or the balanced Dicke state only ever enter the
estimators through their product, whose law is (1 + x_p x_q V cos(dtheta))/4 with
visibility V = 1 (Bell) or N/(2(N-1)) (Dicke).
"""

from __future__ import annotations

from collections.abc import Sequence
from math import cos

import numpy as np

from ..errors import DimensionError, InvalidEnsembleError
from .measurement import MeasurementAngles, OutcomeString, outcome_signs


def ghz_phase(flags: Sequence[int], angles: MeasurementAngles) -> float:
    """Collective fringe phase sum_i (-1)^f_i theta_i."""
    if len(flags) != len(angles):
        raise DimensionError(f"{len(angles)} angles for a sequence of length {len(flags)}")
    signs = 1 - 2 * np.asarray([int(f) for f in flags])
    return float(np.dot(signs, angles.as_array()))


def parity_strings(parities: np.ndarray, num_qubits: int, rng: np.random.Generator) -> np.ndarray:
    """Uniformly random +/-1 strings with the requested product, one row per parity."""
    parities = np.asarray(parities, dtype=np.int8)
    free = rng.choice(np.array([1, -1], dtype=np.int8), size=(parities.size, num_qubits - 1))
    last = parities * np.prod(free, axis=1, dtype=np.int8)
    return np.concatenate([free, last[:, None].astype(np.int8)], axis=1)


def draw_parities(phases: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """+1 with probability (1 + cos phi)/2, elementwise."""
    p_plus = 0.5 * (1.0 + np.cos(np.asarray(phases, dtype=float)))
    return np.where(rng.random(p_plus.shape) < p_plus, 1, -1).astype(np.int8)


def sample_ghz_closed_form(
    flags: Sequence[int], angles: MeasurementAngles, rng: np.random.Generator
) -> OutcomeString:
    phi = ghz_phase(flags, angles)
    parity = draw_parities(np.array([phi]), rng)
    return OutcomeString(tuple(parity_strings(parity, len(angles), rng)[0]))


def ghz_closed_form_distribution(flags: Sequence[int], angles: MeasurementAngles) -> np.ndarray:
    """The exact outcome table implied by the parity-then-uniform sampler."""
    phi = ghz_phase(flags, angles)
    n = len(angles)
    p_plus = 0.5 * (1.0 + cos(phi))
    parity = np.prod(outcome_signs(n), axis=1)
    # each parity class holds 2^(N-1) strings
    return np.where(parity == 1, p_plus, 1.0 - p_plus) / float(1 << (n - 1))


def pair_law(correlation: float) -> np.ndarray:
    """Joint table over (x_a, x_b) in index order (++, +-, -+, --)."""
    return np.array(
        [1 + correlation, 1 - correlation, 1 - correlation, 1 + correlation], dtype=float
    ) / 4.0


def sample_correlated_pairs(
    correlations: np.ndarray, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """Draw (x_a, x_b) with uniform marginals and E[x_a x_b] = correlation, elementwise."""
    correlations = np.asarray(correlations, dtype=float)
    x_a = rng.choice(np.array([1, -1], dtype=np.int8), size=correlations.shape)
    agree = rng.random(correlations.shape) < 0.5 * (1.0 + correlations)
    x_b = np.where(agree, x_a, -x_a).astype(np.int8)
    return x_a, x_b


def sample_bell_pair_outcomes(
    theta_p: float, theta_c: float, rng: np.random.Generator
) -> tuple[int, int]:
    x_p, x_c = sample_correlated_pairs(np.array([cos(theta_p - theta_c)]), rng)
    return int(x_p[0]), int(x_c[0])


def dicke_visibility(n: int) -> float:
    """Pair-correlation amplitude N/(2(N-1)) of the balanced Dicke state."""
    if n < 2:
        raise InvalidEnsembleError(f"Dicke visibility needs N >= 2, got {n}")
    return n / (2.0 * (n - 1))


def dicke_pair_correlation(n: int, delta_theta: float) -> float:
    return dicke_visibility(n) * cos(delta_theta)


def sample_dicke_pair(
    n: int, theta_p: float, theta_i: float, rng: np.random.Generator
) -> tuple[int, int]:
    """Pair-marginal sampler; does not reproduce cross-party correlations."""
    corr = dicke_pair_correlation(n, theta_i - theta_p)
    x_p, x_i = sample_correlated_pairs(np.array([corr]), rng)
    return int(x_p[0]), int(x_i[0])
