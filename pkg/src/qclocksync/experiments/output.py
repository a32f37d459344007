"""CSV, JSON and text artifacts of runs, sweeps and validation.

CSV numbers use ``repr`` so files are locale independent and byte-identical for a
given config; the optional first line carries the only time-dependent content.
"""

from __future__ import annotations

import csv
from collections.abc import Iterable, Sequence
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

from pydantic import BaseModel

from .monte_carlo import TrialSummary
from .sweep import SweepTable
from .validation import ValidationReport

RESULTS_COLUMNS = (
    "row_type",
    "protocol",
    "N",
    "trial",
    "party",
    "adjustment_hat",
    "true_adjustment",
    "error",
    "analytic_stderr",
    "clamped",
)
EFFICIENCY_COLUMNS = ("protocol", "N", "Q", "k", "empirical_accuracy", "analytic_accuracy", "ratio")
VALIDATION_COLUMNS = ("check", "max_deviation", "threshold", "passed")


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if hasattr(value, "value"):
        return str(value.value)
    return str(value)


def write_csv(
    path: Path,
    headers: Sequence[str],
    rows: Iterable[Sequence[Any]],
    *,
    timestamp: bool = True,
) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as f:
        if timestamp:
            f.write(f"# generated {datetime.now(timezone.utc).isoformat(timespec='seconds')}\n")
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(headers)
        for row in rows:
            writer.writerow([_cell(v) for v in row])
    return path


def results_rows(summary: TrialSummary) -> list[list[Any]]:
    rows: list[list[Any]] = []
    proto, n = summary.protocol, summary.n
    for trial, report in enumerate(summary.reports):
        for p in report.parties:
            rows.append(
                ["party", proto, n, trial, p.party, p.adjustment_hat, p.true_adjustment,
                 p.error, p.analytic_stderr, report.clamp_count]
            )
    for s in summary.parties:
        rows.append(
            ["summary", proto, n, None, s.party, s.rms_error, None, s.ratio, s.analytic_stderr,
             summary.clamp_count]
        )
    # pooled over parties; party left empty
    rows.append(
        ["summary", proto, n, None, None, summary.pooled_rms, None, summary.pooled_ratio,
         summary.pooled_analytic, summary.clamp_count]
    )
    return rows


def write_results_csv(path: Path, summary: TrialSummary, *, timestamp: bool = True) -> Path:
    return write_csv(path, RESULTS_COLUMNS, results_rows(summary), timestamp=timestamp)


def write_efficiency_csv(path: Path, table: SweepTable, *, timestamp: bool = True) -> Path:
    rows = (
        [r.protocol, r.n, r.q, r.k, r.empirical_accuracy, r.analytic_accuracy, r.ratio]
        for r in table.rows
    )
    return write_csv(path, EFFICIENCY_COLUMNS, rows, timestamp=timestamp)


def write_validation_csv(path: Path, report: ValidationReport, *, timestamp: bool = True) -> Path:
    rows = ([c.check, c.max_deviation, c.threshold, c.passed] for c in report.checks)
    return write_csv(path, VALIDATION_COLUMNS, rows, timestamp=timestamp)


def write_json(path: Path, model: BaseModel) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(model.model_dump_json(indent=2) + "\n", encoding="utf-8")
    return path


def format_summary(summary: TrialSummary) -> str:
    lines = [
        f"protocol {summary.protocol.value}  N={summary.n}  k={summary.k}  Q={summary.q}  "
        f"trials={summary.trials}  seed={summary.seed}  estimator={summary.estimator_mode.value}",
    ]
    for s in summary.parties:
        lines.append(
            f"party {s.party}: rms {s.rms_error:.6g}  analytic {s.analytic_stderr:.6g}  ratio {s.ratio:.4f}"
        )
    lines.append(
        f"pooled: rms {summary.pooled_rms:.6g}  analytic {summary.pooled_analytic:.6g}  "
        f"ratio {summary.pooled_ratio:.4f}"
    )
    if summary.clamp_count:
        lines.append(f"clamped estimates: {summary.clamp_count} in {summary.trials_with_clamps} trials")
    return "\n".join(lines) + "\n"


def write_summary_text(path: Path, summary: TrialSummary) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_summary(summary), encoding="utf-8")
    return path
