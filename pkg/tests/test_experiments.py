"""Tests for trials, Monte Carlo statistics, sweeps and sampler validation.

Tests marked ``slow`` reproduce the precision and efficiency predictions with a few
hundred trials each; deselect them with ``-m "not slow"``.
"""

import csv
import json
from math import sqrt

import numpy as np
import pytest

from qclocksync.errors import ConfigError
from qclocksync.estimation import analytic_dt, qubit_efficiency
from qclocksync.experiments import (
    efficiency_sweep,
    monte_carlo,
    run_trial,
    run_trials,
    summarize,
    validate_samplers,
    write_efficiency_csv,
    write_json,
    write_results_csv,
    write_validation_csv,
)
from qclocksync.experiments.sweep import default_qubit_budget
from qclocksync.protocol import ProtocolKind
from qclocksync.quantum import samplers


class TestRunTrial:
    """Single protocol trials."""

    def test_ghz_two_parties_recovers_offsets(self, make_config):
        """Test a two-party GHZ trial against explicit offsets."""
        cfg = make_config(N=2, k=4096, offsets=[0.1, -0.1], seed=11)
        report = run_trial(cfg, 0)
        sigma = 0.5 / sqrt(4096)
        assert report.adjustments() == pytest.approx([0.1, -0.1], abs=4 * sigma)
        assert report.parties[0].analytic_stderr == pytest.approx(sigma)

    @pytest.mark.parametrize(
        "protocol, k", [("GHZ", 6 * 1000), ("PAIRS", 4000), ("DICKE", 4000)]
    )
    def test_zero_offsets_give_zero_estimates(self, protocol, k, make_config):
        """Test that zero offsets give estimates consistent with zero."""
        cfg = make_config(protocol=protocol, k=k, offsets=[0.0] * 4, seed=5)
        report = run_trial(cfg, 0)
        for p in report.estimated_parties():
            assert abs(p.adjustment_hat) < 4 * p.analytic_stderr

    def test_deterministic_per_trial_index(self, make_config):
        """Test that a trial depends only on seed and index."""
        cfg = make_config(protocol="DICKE", k=200, offset_spread=0.1)
        assert run_trial(cfg, 3) == run_trial(cfg, 3)
        assert run_trial(cfg, 3) != run_trial(cfg, 4)

    def test_random_offsets_change_per_trial(self, make_config):
        """Test that random offsets differ between trials."""
        cfg = make_config()
        a, b = run_trial(cfg, 0), run_trial(cfg, 1)
        assert a.party(0).true_adjustment != b.party(0).true_adjustment

    def test_standard_party_recentering(self, make_config):
        """Test trials reported relative to a standard party."""
        report = run_trial(make_config(standard_party=1), 0)
        assert report.reference_party == 1
        assert report.party(1).adjustment_hat == 0.0

    def test_two_quadrature_mode(self, make_config):
        """Test a trial with two-quadrature estimation."""
        cfg = make_config(estimator_mode="TWO_QUADRATURE", k=12_000, offsets=[0.2, -0.1, 0.05, -0.15])
        report = run_trial(cfg, 0)
        assert report.variance_penalty is not None
        for p in report.parties:
            assert abs(p.error) < 5 * p.analytic_stderr * sqrt(2)


class TestMonteCarlo:
    """Aggregation over trials."""

    def test_trial_order_does_not_matter(self, make_config):
        """Test that trial results do not depend on execution order."""
        cfg = make_config(trials=4)
        forward = run_trials(cfg)
        backward = run_trials(cfg, [3, 2, 1, 0])
        assert forward == list(reversed(backward))

    def test_threads_do_not_change_results(self, make_config):
        """Test that worker threads give the serial results."""
        serial = monte_carlo(make_config(trials=6, threads=1))
        threaded = monte_carlo(make_config(trials=6, threads=3))
        assert serial.reports == threaded.reports
        assert serial.pooled_rms == threaded.pooled_rms

    def test_summary_fields(self, make_config):
        """Test the Monte Carlo summary fields."""
        summary = monte_carlo(make_config(protocol="PAIRS", k=500, trials=5))
        assert [p.party for p in summary.parties] == [1, 2, 3]
        assert all(p.rms_error >= 0 and np.isfinite(p.ratio) for p in summary.parties)
        assert summary.pooled_analytic == pytest.approx(analytic_dt(ProtocolKind.PAIRS, 4, 500))
        assert summary.q == 500 * 6
        assert summary.wall_time_s >= 0

    def test_summarize_requires_reports(self, make_config):
        """Test summarizing an empty list of reports."""
        with pytest.raises(ValueError):
            summarize(make_config(), [])


class TestOutputs:
    """CSV and JSON artifacts."""

    def test_results_csv_layout(self, make_config, tmp_path):
        """Test the results CSV header and row types."""
        summary = monte_carlo(make_config(trials=3))
        path = write_results_csv(tmp_path / "results.csv", summary, timestamp=False)
        rows = list(csv.reader(path.read_text().splitlines()))
        assert rows[0] == [
            "row_type", "protocol", "N", "trial", "party", "adjustment_hat",
            "true_adjustment", "error", "analytic_stderr", "clamped",
        ]
        party_rows = [r for r in rows[1:] if r[0] == "party"]
        summary_rows = [r for r in rows[1:] if r[0] == "summary"]
        assert len(party_rows) == 3 * 4
        assert len(summary_rows) == 4 + 1
        assert float(party_rows[0][5]) == summary.reports[0].parties[0].adjustment_hat
        assert summary_rows[-1][4] == ""

    def test_results_csv_byte_identical(self, make_config, tmp_path):
        """Test byte-identical CSV output without the timestamp."""
        cfg = make_config(trials=3)
        a = write_results_csv(tmp_path / "a.csv", monte_carlo(cfg), timestamp=False)
        b = write_results_csv(tmp_path / "b.csv", monte_carlo(cfg), timestamp=False)
        assert a.read_bytes() == b.read_bytes()

    def test_timestamp_line(self, make_config, tmp_path):
        """Test the generated-at first line."""
        path = write_results_csv(tmp_path / "r.csv", monte_carlo(make_config(trials=2)))
        assert path.read_text().startswith("# generated ")

    def test_summary_json_excludes_reports(self, make_config, tmp_path):
        """Test that summary.json omits per-trial reports."""
        path = write_json(tmp_path / "summary.json", monte_carlo(make_config(trials=2)))
        data = json.loads(path.read_text())
        assert data["schema_version"] == 1
        assert "reports" not in data
        assert data["protocol"] == "GHZ"


class TestSweep:
    """Efficiency sweeps at fixed qubit budget."""

    def test_default_budget(self, make_config):
        """Test the default sweep qubit budget."""
        assert default_qubit_budget(make_config(), [4, 6, 8], list(ProtocolKind)) == 50_400
        assert default_qubit_budget(make_config(), [8], list(ProtocolKind)) == 50_400

    def test_small_sweep_shape_and_analytic_column(self, make_config, tmp_path):
        """Test sweep rows and the analytic accuracy column."""
        table = efficiency_sweep([4], 50_400, list(ProtocolKind), make_config(trials=3))
        assert [(r.protocol, r.n) for r in table.rows] == [(p, 4) for p in ProtocolKind]
        for r in table.rows:
            assert r.analytic_accuracy == qubit_efficiency(r.protocol, 4, 50_400)
            assert r.ratio == pytest.approx(r.empirical_accuracy / r.analytic_accuracy)
        assert table.row(ProtocolKind.PAIRS, 4).k == 50_400 // 6
        path = write_efficiency_csv(tmp_path / "efficiency.csv", table, timestamp=False)
        assert path.read_text().splitlines()[0] == (
            "protocol,N,Q,k,empirical_accuracy,analytic_accuracy,ratio"
        )

    def test_indivisible_budget_suggests_fix(self, make_config):
        """Test that an indivisible budget suggests valid values."""
        with pytest.raises(ConfigError, match="multiple of 560") as exc:
            efficiency_sweep([8], 1000, [ProtocolKind.GHZ], make_config())
        assert "Q=1120" in str(exc.value)
        assert exc.value.key == "sweep_q"

    def test_empty_n_list(self, make_config):
        """Test sweeping an empty N list."""
        with pytest.raises(ConfigError):
            efficiency_sweep([], 1000, [ProtocolKind.GHZ], make_config())


class TestValidation:
    """Exact sampler cross-checks."""

    def test_all_checks_pass(self, tmp_path):
        """Test that every sampler check passes."""
        report = validate_samplers()
        assert report.passed
        assert len(report.checks) >= 8
        names = {c.check for c in report.checks}
        assert {"ghz_closed_form_vs_statevector_N4", "dicke_pair_correlation_N4", "bell_pair_law"} <= names
        assert all(c.max_deviation < 1e-10 for c in report.checks)
        path = write_validation_csv(tmp_path / "validation.csv", report, timestamp=False)
        assert path.read_text().splitlines()[0] == "check,max_deviation,threshold,passed"

    def test_corrupted_visibility_is_reported(self, monkeypatch):
        """Test that a wrong Dicke visibility fails only the Dicke checks."""
        monkeypatch.setattr(samplers, "dicke_visibility", lambda n: n / (2.0 * n))
        report = validate_samplers()
        assert not report.passed
        failing = {c.check for c in report.failures()}
        assert "dicke_pair_correlation_N4" in failing
        assert "ghz_closed_form_vs_statevector_N4" not in failing


@pytest.mark.slow
class TestPrecisionPredictions:
    """Monte Carlo RMS errors against the analytic predictions."""

    def test_ghz_n4(self, make_config):
        """Test GHZ precision at N=4."""
        summary = monte_carlo(make_config(N=4, k=6 * 2048, trials=200, seed=101))
        assert summary.pooled_analytic == pytest.approx(0.75 / sqrt(6 * 2048))
        assert 0.9 <= summary.pooled_ratio <= 1.1

    def test_pairs_n4(self, make_config):
        """Test pairs precision at N=4."""
        summary = monte_carlo(make_config(protocol="PAIRS", N=4, k=10_000, trials=200, seed=102))
        assert summary.pooled_analytic == pytest.approx(1 / 100)
        assert 0.9 <= summary.pooled_ratio <= 1.1

    @pytest.mark.parametrize("n", [4, 8])
    def test_dicke(self, n, make_config):
        """Test Dicke precision at the default offset spread."""
        cfg = make_config(protocol="DICKE", N=n, k=10_000, trials=200, seed=103, offset_spread=0.3)
        summary = monte_carlo(cfg)
        assert summary.pooled_analytic == pytest.approx(2 * (n - 1) / (n * 100))
        assert 0.9 <= summary.pooled_ratio <= 1.1

    def test_ghz_precision_independent_of_n(self, make_config):
        """Test that scaled GHZ precision does not depend on N."""
        scaled = []
        for n in (4, 6, 8):
            cfg = make_config(N=n, k=10_080, trials=200, seed=104, offset_spread=0.15)
            scaled.append(monte_carlo(cfg).pooled_rms * n / (n - 1))
        assert max(scaled) / min(scaled) <= 1.1

    @pytest.mark.parametrize("protocol", ["GHZ", "PAIRS", "DICKE"])
    def test_doubling_k_halves_variance(self, protocol, make_config):
        """Test that doubling k halves the squared error."""
        rms = [
            monte_carlo(make_config(protocol=protocol, k=k, trials=400, seed=105)).pooled_rms
            for k in (6_000, 12_000)
        ]
        assert (rms[0] / rms[1]) ** 2 == pytest.approx(2.0, rel=0.2)

    def test_efficiency_ratios_n8(self, make_config):
        """Test the efficiency ratios between protocols at N=8."""
        table = efficiency_sweep([8], 78_400, list(ProtocolKind), make_config(trials=200, seed=106))
        ghz = table.row(ProtocolKind.GHZ, 8).empirical_accuracy
        pairs = table.row(ProtocolKind.PAIRS, 8).empirical_accuracy
        dicke = table.row(ProtocolKind.DICKE, 8).empirical_accuracy
        gain = 8 / 7
        assert pairs / ghz == pytest.approx((0.5 * gain) / gain**2, rel=0.15)
        assert dicke / ghz == pytest.approx(0.25, rel=0.15)
        for r in table.rows:
            assert 0.85 <= r.ratio <= 1.15
