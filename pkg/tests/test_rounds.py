"""Tests for single rounds and batched schedule simulation."""

import numpy as np
import pytest
from scipy.stats import chi2_contingency

from qclocksync.errors import CapacityError, DimensionError, InvalidEnsembleError, RecordFormatError
from qclocksync.protocol import (
    ClockEnsemble,
    DickeSampler,
    MeasurementRecord,
    ProtocolKind,
    Quadrature,
    QuadraturePolicy,
    ScheduledRound,
    make_schedule,
    run_round_dicke,
    run_round_ghz,
    run_round_pairs,
    simulate,
    simulate_dicke,
    simulate_ghz,
    simulate_pairs,
)
from qclocksync.quantum import OutcomeString, dicke_visibility


def _within(mean: float, expected: float, samples: int) -> bool:
    sigma = np.sqrt(max(1 - expected**2, 1e-12) / samples)
    return abs(mean - expected) < 4 * sigma


class TestSingleRounds:
    """Step-by-step protocol rounds."""

    def test_ghz_round_record_is_consistent(self, rng):
        """Test that GHZ records carry the outcome parity."""
        ensemble = ClockEnsemble(4, 1.0, (0.1, -0.05, 0.0, 0.02))
        for use_statevector in (False, True):
            record = run_round_ghz(
                ensemble, ScheduledRound(3, Quadrature.SINE), rng, use_statevector=use_statevector
            )
            assert record.product == record.outcomes.parity
            assert len(record.outcomes) == 4

    def test_ghz_cosine_round_at_zero_offset_is_even(self, rng):
        """Test even parity for cosine rounds at zero offset."""
        ensemble = ClockEnsemble(6, 1.0, (0.0,) * 6)
        for j in range(20):
            record = run_round_ghz(ensemble, ScheduledRound(j, Quadrature.COSINE), rng)
            assert record.product == 1

    def test_ghz_sequence_index_out_of_range(self, rng):
        """Test rejection of GHZ sequence indices out of range."""
        ensemble = ClockEnsemble(4, 1.0, (0.0,) * 4)
        with pytest.raises(DimensionError, match="out of range"):
            run_round_ghz(ensemble, ScheduledRound(9, Quadrature.SINE), rng)
        with pytest.raises(DimensionError):
            run_round_ghz(ensemble, ScheduledRound(-1, Quadrature.SINE), rng)

    def test_record_with_wrong_product_rejected(self):
        """Test rejection of records with an inconsistent product."""
        with pytest.raises(RecordFormatError):
            MeasurementRecord(ScheduledRound(0, Quadrature.SINE), OutcomeString((1, -1)), 1)

    def test_pairs_round_rejects_central_party(self, rng):
        """Test that the central party cannot pair with itself."""
        ensemble = ClockEnsemble(4, 1.0, (0.0,) * 4)
        with pytest.raises(InvalidEnsembleError, match="central"):
            run_round_pairs(ensemble, 0, ScheduledRound(0, Quadrature.SINE), rng)

    def test_pairs_cosine_round_agrees_at_zero_offset(self, rng):
        """Test agreeing pair outcomes for cosine rounds at zero offset."""
        ensemble = ClockEnsemble(4, 1.0, (0.0,) * 4)
        for party in (1, 2, 3):
            record = run_round_pairs(ensemble, party, ScheduledRound(0, Quadrature.COSINE), rng)
            assert record.product == 1
            assert record.qubits == 2

    def test_dicke_statevector_over_limit(self, rng):
        """Test the capacity error for large Dicke statevectors."""
        ensemble = ClockEnsemble(20, 1.0, (0.0,) * 20)
        with pytest.raises(CapacityError, match="MARGINAL"):
            run_round_dicke(
                ensemble, ScheduledRound(0, Quadrature.SINE), rng, sampler=DickeSampler.STATEVECTOR
            )

    def test_dicke_auto_falls_back_to_marginal(self, rng):
        """Test the marginal fallback above the statevector limit."""
        ensemble = ClockEnsemble(20, 1.0, (0.0,) * 20)
        record = run_round_dicke(ensemble, ScheduledRound(0, Quadrature.SINE), rng)
        assert len(record.pair_products()) == 19

    @pytest.mark.parametrize("sampler", [DickeSampler.STATEVECTOR, DickeSampler.MARGINAL])
    def test_two_party_dicke_matches_bell_pair(self, sampler, rng):
        """Test that a two-party Dicke round matches a Bell pair round."""
        ensemble = ClockEnsemble(2, 1.0, (0.0, 0.4))
        rounds = 3000
        for quad, expected in ((Quadrature.COSINE, np.cos(0.4)), (Quadrature.SINE, -np.sin(0.4))):
            # rows: Dicke, Bell pair; columns: (central, party) in ++, +-, -+, --
            table = np.zeros((2, 4), dtype=np.int64)
            products = np.zeros((2, rounds))
            for r in range(rounds):
                dicke = run_round_dicke(ensemble, ScheduledRound(0, quad), rng, sampler=sampler)
                x_c, x_p = dicke.outcomes.outcomes
                pair = run_round_pairs(ensemble, 1, ScheduledRound(0, quad), rng)
                table[0, 2 * (x_c < 0) + (x_p < 0)] += 1
                table[1, 2 * (pair.x_central < 0) + (pair.x_party < 0)] += 1
                products[:, r] = (x_c * x_p, pair.product)
            assert chi2_contingency(table).pvalue > 1e-3
            assert _within(float(products[0].mean()), expected, rounds)
            assert _within(float(products[1].mean()), expected, rounds)


class TestBatchedSimulation:
    """Whole schedules drawn at once."""

    def test_ghz_cosine_zero_offsets_all_even(self, rng):
        """Test batched cosine GHZ rounds at zero offset."""
        ensemble = ClockEnsemble(4, 1.0, (0.0,) * 4)
        schedule = make_schedule(4, 600, quadrature_policy=QuadraturePolicy.COSINE_ONLY)
        batch = simulate_ghz(ensemble, schedule, rng)
        assert batch.outcomes.shape == (600, 4)
        assert np.all(batch.products() == 1)

    def test_ghz_sine_fringe_follows_time_difference(self, rng):
        """Test the batched GHZ sine fringe."""
        offsets = (0.12, -0.04, 0.03, -0.06)
        ensemble = ClockEnsemble(4, 1.0, offsets)
        schedule = make_schedule(4, 6 * 20_000)
        batch = simulate_ghz(ensemble, schedule, rng)
        products = batch.products()
        signs = np.array([1, 1, -1, -1])  # sequence 0 = (0, 0, 1, 1)
        t0 = float(np.dot(signs, offsets))
        mean = float(np.mean(products[batch.schedule.labels == 0]))
        assert _within(mean, -np.sin(t0), 20_000)

    def test_ghz_nominal_time_does_not_change_outcomes(self):
        """Test that the nominal time cancels."""
        ensemble = ClockEnsemble(4, 1.0, (0.1, -0.1, 0.05, 0.0))
        a = simulate_ghz(ensemble, make_schedule(4, 600), np.random.default_rng(3))
        b = simulate_ghz(
            ensemble, make_schedule(4, 600, nominal_time=37.5), np.random.default_rng(3)
        )
        assert np.array_equal(a.outcomes, b.outcomes)

    def test_pairs_shapes_and_cost(self, rng):
        """Test pairs batch shape and qubit cost."""
        ensemble = ClockEnsemble(6, 1.0, (0.0,) * 6)
        schedule = make_schedule(
            6, 50, quadrature_policy=QuadraturePolicy.COSINE_ONLY, num_sequences=1
        )
        batch = simulate_pairs(ensemble, schedule, rng)
        assert batch.outcomes.shape == (50, 5, 2)
        assert batch.qubits_consumed == 50 * 10
        assert np.all(batch.products() == 1)

    def test_pairs_sine_fringe(self, rng):
        """Test the batched pairs sine fringe."""
        ensemble = ClockEnsemble(4, 1.0, (0.0, 0.2, -0.1, 0.05))
        schedule = make_schedule(4, 40_000, num_sequences=1)
        products = simulate_pairs(ensemble, schedule, rng).products()
        for i, dt in enumerate((0.2, -0.1, 0.05)):
            assert _within(float(products[:, i].mean()), -np.sin(dt), 40_000)

    @pytest.mark.parametrize("sampler", [DickeSampler.STATEVECTOR, DickeSampler.MARGINAL])
    def test_dicke_pair_fringe(self, sampler, rng):
        """Test the batched Dicke pair fringe."""
        n = 6
        offsets = (0.0, 0.1, -0.05, 0.02, 0.0, -0.1)
        ensemble = ClockEnsemble(n, 1.0, offsets)
        schedule = make_schedule(n, 30_000, num_sequences=1)
        batch = simulate_dicke(ensemble, schedule, rng, sampler=sampler)
        products = batch.products()
        v = dicke_visibility(n)
        for i in range(1, n):
            assert _within(float(products[:, i - 1].mean()), -v * np.sin(offsets[i]), 30_000)

    def test_dispatch_by_protocol(self, rng):
        """Test dispatching simulation by protocol."""
        ensemble = ClockEnsemble(4, 1.0, (0.0,) * 4)
        schedule = make_schedule(4, 8, num_sequences=1)
        for protocol in ProtocolKind:
            sched = make_schedule(4, 12) if protocol is ProtocolKind.GHZ else schedule
            batch = simulate(protocol, ensemble, sched, rng)
            assert batch.protocol is protocol
            assert len(batch.records()) == (len(sched) * 3 if protocol is ProtocolKind.PAIRS else len(sched))
