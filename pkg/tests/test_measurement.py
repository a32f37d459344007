"""Tests for exact measurement statistics and the closed-form samplers."""

import numpy as np
import pytest
from scipy import stats

from qclocksync.errors import DimensionError, InvalidEnsembleError
from qclocksync.protocol.sequences import enumerate_sequences
from qclocksync.quantum import (
    MeasurementAngles,
    OutcomeString,
    build_bell_pair,
    build_dicke_state,
    build_ghz_state,
    dicke_pair_correlation,
    dicke_visibility,
    ghz_closed_form_distribution,
    ghz_phase,
    outcome_distribution,
    outcome_signs,
    pair_law,
    product_expectation,
    sample_ghz_closed_form,
    sample_outcomes,
)
from qclocksync.quantum.samplers import (
    draw_parities,
    parity_strings,
    sample_correlated_pairs,
)


def random_angles(rng, n):
    return MeasurementAngles(tuple(rng.uniform(-np.pi, np.pi, size=n)))


class TestOutcomeTables:
    """Index conventions of outcome tables."""

    def test_sign_table_order(self):
        """Test the order of the outcome sign table."""
        assert outcome_signs(2).tolist() == [[1, 1], [1, -1], [-1, 1], [-1, -1]]

    def test_outcome_string_index(self):
        """Test outcome string to basis index conversion."""
        s = OutcomeString((1, -1, -1))
        assert s.to_index() == 0b011
        assert s.parity == 1
        assert OutcomeString.from_index(0b011, 3) == s

    def test_outcomes_must_be_signs(self):
        """Test rejection of outcomes other than +1 and -1."""
        with pytest.raises(DimensionError):
            OutcomeString((1, 0))

    def test_angle_count_must_match_qubits(self, rng):
        """Test that angle count must match the qubit count."""
        with pytest.raises(DimensionError):
            outcome_distribution(build_dicke_state(4), random_angles(rng, 3))

    def test_from_times_applies_omega_and_shifts(self):
        """Test angles built from clock times and quadrature shifts."""
        angles = MeasurementAngles.from_times(2.0, [0.5, -0.25], [0.0, np.pi / 2])
        assert angles.angles == pytest.approx((1.0, -0.5 + np.pi / 2))


class TestSamplerOracles:
    """Closed-form laws agree with the statevector engine entry by entry."""

    @pytest.mark.parametrize("n", [2, 4, 6])
    def test_ghz_closed_form_matches_statevector(self, n, rng):
        """Test the closed-form GHZ law against the statevector."""
        for seq in enumerate_sequences(n):
            angles = random_angles(rng, n)
            exact = outcome_distribution(build_ghz_state(seq.flags), angles)
            closed = ghz_closed_form_distribution(seq.flags, angles)
            assert np.max(np.abs(exact - closed)) < 1e-10

    @pytest.mark.parametrize("n", [2, 4, 6, 8])
    def test_dicke_pair_correlation(self, n, rng):
        """Test the Dicke pair correlation against the statevector."""
        state = build_dicke_state(n)
        angles = random_angles(rng, n)
        theta = angles.as_array()
        for j in range(1, n):
            measured = product_expectation(state, angles, (0, j))
            assert measured == pytest.approx(
                dicke_pair_correlation(n, theta[j] - theta[0]), abs=1e-10
            )

    def test_dicke_visibility_values(self):
        """Test Dicke visibilities for small N."""
        assert dicke_visibility(2) == 1.0
        assert dicke_visibility(4) == pytest.approx(2 / 3)
        assert dicke_visibility(8) == pytest.approx(4 / 7)
        with pytest.raises(InvalidEnsembleError):
            dicke_visibility(1)

    def test_bell_pair_law(self, rng):
        """Test the Bell pair joint law."""
        for _ in range(10):
            angles = random_angles(rng, 2)
            theta_p, theta_c = angles.angles
            law = pair_law(np.cos(theta_p - theta_c))
            assert np.max(np.abs(outcome_distribution(build_bell_pair(), angles) - law)) < 1e-10

    def test_ghz_full_product_is_the_fringe(self, rng):
        """Test that the full GHZ product is the cosine fringe."""
        seq = enumerate_sequences(8)[17]
        angles = random_angles(rng, 8)
        expected = np.cos(ghz_phase(seq.flags, angles))
        assert product_expectation(build_ghz_state(seq.flags), angles) == pytest.approx(
            expected, abs=1e-10
        )


class TestEmpiricalFringe:
    """Sampled outcome products reproduce cos(sum (-1)^f theta)."""

    SAMPLES = 100_000

    def _check(self, products, expected):
        mean = float(np.mean(products))
        sigma = np.sqrt(max(1 - expected**2, 1e-12) / self.SAMPLES)
        assert abs(mean - expected) < 4 * sigma + 1e-9

    def test_ghz_n4_statevector_sampling(self, rng):
        """Test empirical GHZ fringe from statevector samples."""
        seq = enumerate_sequences(4)[2]
        angles = random_angles(rng, 4)
        outcomes = sample_outcomes(build_ghz_state(seq.flags), angles, self.SAMPLES, rng)
        self._check(np.prod(outcomes, axis=1), np.cos(ghz_phase(seq.flags, angles)))

    def test_ghz_n8_closed_form_sampling(self, rng):
        """Test empirical GHZ fringe from closed-form samples."""
        seq = enumerate_sequences(8)[41]
        angles = random_angles(rng, 8)
        phi = ghz_phase(seq.flags, angles)
        outcomes = parity_strings(draw_parities(np.full(self.SAMPLES, phi), rng), 8, rng)
        self._check(np.prod(outcomes, axis=1), np.cos(phi))

    def test_closed_form_sampler_chi_square(self, rng):
        """Test closed-form sample frequencies with a chi-square test."""
        seq = enumerate_sequences(4)[4]
        angles = MeasurementAngles((0.3, -1.1, 0.7, 2.0))
        draws = [sample_ghz_closed_form(seq.flags, angles, rng).to_index() for _ in range(8000)]
        observed = np.bincount(draws, minlength=16)
        expected = ghz_closed_form_distribution(seq.flags, angles) * len(draws)
        mask = expected > 0
        _, p_value = stats.chisquare(observed[mask], expected[mask])
        assert p_value > 1e-4


class TestPairSampling:
    """Correlated +/-1 pairs."""

    def test_parity_strings_have_requested_parity(self, rng):
        """Test that drawn strings have the requested parity."""
        parities = rng.choice([1, -1], size=4000)
        strings = parity_strings(parities, 6, rng)
        assert np.array_equal(np.prod(strings, axis=1), parities)
        assert abs(float(np.mean(strings[:, :5]))) < 0.05

    def test_correlated_pairs_mean_product(self, rng):
        """Test the mean product of correlated pairs."""
        corr = np.full(200_000, 0.4)
        x_a, x_b = sample_correlated_pairs(corr, rng)
        assert float(np.mean(x_a.astype(int) * x_b)) == pytest.approx(0.4, abs=0.01)
        assert abs(float(np.mean(x_a))) < 0.01
