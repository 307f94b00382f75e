"""CSV emission: long-format, plot-ready files with fixed schemas.

ticks.csv        one row per (replication, tick)
summary.csv      one row per (scenario, metric); pooled and per-replication
                 statistics are distinguished by a metric-name suffix
sensitivity.csv  one row per (parameter, value, metric)

All files: header row, '.' decimal point, UTF-8, '\n' newlines; output is
byte-identical under a fixed seed.
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Iterable

from .engine import TICKS_CSV_COLUMNS, TickReport, report_row
from .experiments import METRICS, RunSummary, SweepCell

SUMMARY_CSV_COLUMNS = ("scenario", "metric", "mean", "sd", "n")
SENSITIVITY_CSV_COLUMNS = ("parameter", "value", "metric", "mean", "sd")


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".10g")
    return str(value)


def _write(path: Path, header: Iterable[str], rows: Iterable[Iterable]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def write_ticks_csv(path: str | Path, runs: list[list[TickReport]]) -> None:
    """All replications' tick series; run_id is the replication index."""
    rows = (report_row(run_id, r) for run_id, reports in enumerate(runs) for r in reports)
    _write(Path(path), TICKS_CSV_COLUMNS, rows)


def write_summary_csv(path: str | Path, summaries: list[RunSummary]) -> None:
    rows = []
    for summary in summaries:
        for metric in METRICS:
            pooled = summary.pooled[metric]
            rows.append([summary.scenario, metric, pooled.mean, pooled.sd, pooled.n])
            rep = summary.per_rep[metric]
            rows.append([summary.scenario, metric + "_repmean", rep.mean, rep.sd, rep.n])
    _write(Path(path), SUMMARY_CSV_COLUMNS, rows)


def write_sensitivity_csv(path: str | Path, cells: list[SweepCell]) -> None:
    rows = []
    for cell in cells:
        for metric in METRICS:
            stat = cell.summary.pooled[metric]
            rows.append([cell.parameter, cell.value, metric, stat.mean, stat.sd])
    _write(Path(path), SENSITIVITY_CSV_COLUMNS, rows)


def summary_text(summary: RunSummary) -> str:
    """Human-readable digest of one experiment for stdout."""
    lines = [
        f"scenario {summary.scenario}: {summary.n_reps} replications"
        + (f", burn-in {summary.burn_in}" if summary.burn_in else "")
    ]
    for metric in METRICS:
        pooled = summary.pooled[metric]
        scale = 100.0 if metric.startswith("completion") else 1.0
        unit = "%" if metric.startswith("completion") else " EUR/month"
        lines.append(
            f"  {metric:28s} mean {pooled.mean * scale:8.2f}{unit}"
            f"  sd {pooled.sd * scale:.2f}  (n={pooled.n})"
        )
    for name, w in summary.welch.items():
        lines.append(f"  Welch {name}: t={w.t:.3f} dof={w.dof:.1f} p={w.p:.4g}")
    if summary.n_wage_fallbacks or summary.n_premium_sentinels:
        lines.append(
            f"  flags: wage fallbacks {summary.n_wage_fallbacks},"
            f" premium sentinels {summary.n_premium_sentinels}"
        )
    return "\n".join(lines)
