from __future__ import annotations

from collections.abc import Callable
from pathlib import Path
from typing import Optional, TypeVar

import typer
from rich import print
from rich.console import Console
from rich.markup import escape
from rich.table import Table

from .config import ExperimentConfig, load_config, parse_config
from .errors import ConfigError, QClockSyncError
from .estimation.adjustment import (
    AdjustmentReport,
    estimate_dicke_offsets,
    estimate_ghz_adjustments,
    estimate_pairs_offsets,
)
from .estimation.fringe import EstimatorMode
from .experiments.monte_carlo import TrialSummary, monte_carlo
from .experiments.output import (
    write_efficiency_csv,
    write_json,
    write_results_csv,
    write_summary_text,
    write_validation_csv,
)
from .experiments.sweep import SweepTable, efficiency_sweep
from .experiments.trial import simulate_trial
from .experiments.validation import ValidationReport, validate_samplers
from .logging_setup import configure_logging
from .protocol.broadcast import BroadcastLog, replay as replay_log
from .protocol.kinds import ProtocolKind
from .version import __version__

EXIT_CONFIG = 1
EXIT_RUNTIME = 2
EXIT_VALIDATION = 3

app = typer.Typer(add_completion=False, help="Quantum clock synchronization Monte Carlo simulator")
err = Console(stderr=True)

T = TypeVar("T")


def _show_version(value: bool) -> None:
    if value:
        print(__version__)
        raise typer.Exit(0)


@app.callback()
def _main(
    version: bool = typer.Option(
        False, "--version", callback=_show_version, is_eager=True, help="Show version"
    ),
    verbose: int = typer.Option(0, "--verbose", "-v", count=True, help="Repeat for debug logs"),
    quiet: bool = typer.Option(False, "--quiet", "-q", help="Warnings only"),
) -> None:
    configure_logging(0 if quiet else 1 + verbose)


def _guarded(action: Callable[[], T]) -> T:
    """Run ``action`` mapping library errors to exit codes with a one-line message."""
    try:
        return action()
    except ConfigError as e:
        where = f" (key '{e.key}')" if e.key else ""
        err.print(f"[red]Configuration error{where}:[/red] {escape(str(e))}")
        raise typer.Exit(EXIT_CONFIG) from e
    except QClockSyncError as e:
        err.print(f"[red]{type(e).__name__}:[/red] {escape(str(e))}")
        raise typer.Exit(EXIT_RUNTIME) from e
    except OSError as e:
        err.print(f"[red]I/O error:[/red] {escape(str(e))}")
        raise typer.Exit(EXIT_RUNTIME) from e


def _load(
    config_path: Path | None, seed: int | None, threads: int | None, **extra: object
) -> ExperimentConfig:
    cfg = parse_config(config_path) if config_path is not None else load_config({})
    overrides: dict[str, object] = {k: v for k, v in extra.items() if v is not None}
    if seed is not None:
        overrides["seed"] = seed
    if threads is not None:
        overrides["threads"] = threads
    if not overrides:
        return cfg
    return load_config({**cfg.model_dump(), **overrides})


def _summary_table(summary: TrialSummary) -> Table:
    table = Table(
        title=f"{summary.protocol.value} N={summary.n} k={summary.k} trials={summary.trials}"
    )
    table.add_column("party", justify="right")
    table.add_column("rms error", justify="right")
    table.add_column("analytic", justify="right")
    table.add_column("ratio", justify="right")
    for s in summary.parties:
        table.add_row(str(s.party), f"{s.rms_error:.6g}", f"{s.analytic_stderr:.6g}", f"{s.ratio:.4f}")
    table.add_row(
        "pooled",
        f"{summary.pooled_rms:.6g}",
        f"{summary.pooled_analytic:.6g}",
        f"{summary.pooled_ratio:.4f}",
    )
    return table


@app.command()
def run(
    config: Optional[Path] = typer.Option(None, "--config", "-c", help="Experiment config (TOML)"),
    out: Path = typer.Option(Path("out"), "--out", "-o", help="Output directory"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Override the master seed"),
    threads: Optional[int] = typer.Option(None, "--threads", help="Parallel trial workers"),
    no_timestamp: bool = typer.Option(False, "--no-timestamp", help="Omit the generated-at CSV line"),
    broadcast_log: bool = typer.Option(False, "--broadcast-log", help="Also write trial 0's broadcast log"),
):
    """Run Monte Carlo trials and write results.csv, summary.json and summary.txt."""

    def action() -> TrialSummary:
        cfg = _load(config, seed, threads)
        summary = monte_carlo(cfg)
        write_results_csv(out / "results.csv", summary, timestamp=not no_timestamp)
        write_json(out / "summary.json", summary)
        write_summary_text(out / "summary.txt", summary)
        if broadcast_log:
            _, batch = simulate_trial(cfg, 0)
            BroadcastLog.from_batch(batch).write(out / "broadcast_trial0.log")
        return summary

    summary = _guarded(action)
    print(_summary_table(summary))
    print(f"[green]Wrote:[/green] {out / 'results.csv'}")


@app.command()
def sweep(
    config: Optional[Path] = typer.Option(None, "--config", "-c", help="Experiment config (TOML)"),
    out: Path = typer.Option(Path("out"), "--out", "-o", help="Output directory"),
    n_values: Optional[list[int]] = typer.Option(None, "--n", help="Party count (repeatable)"),
    qubits: Optional[int] = typer.Option(None, "--q", help="Total qubit budget Q"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Override the master seed"),
    threads: Optional[int] = typer.Option(None, "--threads", help="Parallel trial workers"),
    no_timestamp: bool = typer.Option(False, "--no-timestamp", help="Omit the generated-at CSV line"),
):
    """Compare the accuracy each protocol reaches with the same qubit budget."""

    def action() -> SweepTable:
        cfg = _load(config, seed, threads, sweep_n=n_values or None, sweep_q=qubits)
        table = efficiency_sweep(cfg.sweep_n, cfg.sweep_q, cfg.sweep_protocols, cfg)
        write_efficiency_csv(out / "efficiency.csv", table, timestamp=not no_timestamp)
        write_json(out / "efficiency.json", table)
        return table

    table = _guarded(action)
    view = Table(title=f"Qubit efficiency at Q={table.q}")
    for col in ("protocol", "N", "k", "empirical", "analytic", "ratio"):
        view.add_column(col, justify="right")
    for r in table.rows:
        view.add_row(
            r.protocol.value,
            str(r.n),
            str(r.k),
            f"{r.empirical_accuracy:.6g}",
            f"{r.analytic_accuracy:.6g}",
            f"{r.ratio:.4f}",
        )
    print(view)
    print(f"[green]Wrote:[/green] {out / 'efficiency.csv'}")


@app.command()
def validate(
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Write validation.csv here"),
    seed: int = typer.Option(0, "--seed", help="Seed for the random angle settings"),
    no_timestamp: bool = typer.Option(False, "--no-timestamp", help="Omit the generated-at CSV line"),
):
    """Cross-check the samplers against exact statevector distributions."""

    def action() -> ValidationReport:
        report = validate_samplers(seed)
        if out is not None:
            write_validation_csv(out / "validation.csv", report, timestamp=not no_timestamp)
        return report

    report = _guarded(action)
    table = Table(title="Sampler validation")
    table.add_column("check")
    table.add_column("max deviation", justify="right")
    table.add_column("threshold", justify="right")
    table.add_column("result")
    for c in report.checks:
        status = "[green]PASS[/green]" if c.passed else "[red]FAIL[/red]"
        table.add_row(c.check, f"{c.max_deviation:.3e}", f"{c.threshold:.0e}", status)
    print(table)
    if not report.passed:
        failing = ", ".join(c.check for c in report.failures())
        err.print(f"[red]Validation failed:[/red] {failing}")
        raise typer.Exit(EXIT_VALIDATION)


@app.command()
def replay(
    log_path: Path = typer.Argument(..., exists=True, readable=True, help="Broadcast log"),
    omega: float = typer.Option(1.0, "--omega", help="Clock angular frequency"),
    estimator: EstimatorMode = typer.Option(EstimatorMode.LINEARIZED, "--estimator", help="Inversion mode"),
    json_out: bool = typer.Option(False, "--json", help="Print the report as JSON"),
):
    """Re-estimate clock adjustments from a recorded broadcast log."""

    def action() -> AdjustmentReport:
        if not omega > 0:
            raise ConfigError(f"omega must be positive, got {omega}", key="omega")
        acc = replay_log(BroadcastLog.read(log_path))
        if acc.protocol is ProtocolKind.GHZ:
            return estimate_ghz_adjustments(acc, omega, estimator)
        if acc.protocol is ProtocolKind.PAIRS:
            return estimate_pairs_offsets(acc, omega, estimator)
        return estimate_dicke_offsets(acc, omega, estimator)

    report = _guarded(action)
    if json_out:
        typer.echo(report.model_dump_json(indent=2))
        return
    reference = "average time" if report.reference_party is None else f"party {report.reference_party}"
    table = Table(title=f"{report.protocol.value} N={report.n} k={report.k} (relative to {reference})")
    table.add_column("party", justify="right")
    table.add_column("adjustment", justify="right")
    table.add_column("stderr", justify="right")
    for p in report.parties:
        table.add_row(str(p.party), f"{p.adjustment_hat:.6g}", f"{p.estimated_stderr:.3g}")
    print(table)
