"""CSV and JSON emission of campaign results."""

from __future__ import annotations

# Standard Library
import csv
import logging
from pathlib import Path

# Local
from .config import RunManifest
from .simulation import AggregateReport, ConvergenceTrace

logger = logging.getLogger(__name__)

RESULT_COLUMNS = (
    "sweep_value",
    "scheme",
    "mean_sum_rate_bps_hz",
    "stderr",
    "trials",
    "gap_vs_jbpda_percent",
)

TRACE_COLUMNS = (
    "iteration",
    "mean_sum_rate_bps_hz",
    "mean_best_sum_rate_bps_hz",
    "trials_running",
)

MANIFEST_NAME = "manifest.json"


def format_number(value) -> str:
    """
    Fixed textual form for CSV cells; ``None`` becomes an empty cell.

    Examples:
        >>> format_number(23.0)
        '23'
        >>> format_number(None)
        ''
    """
    if value is None:
        return ""
    if isinstance(value, int):
        return str(value)
    return format(float(value), ".12g")


def _write_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def result_rows(report: AggregateReport) -> list[list[str]]:
    """One row per (sweep point, scheme), in sweep then scheme order."""
    rows = []
    for point in report.points:
        for summary in point.summaries:
            rows.append(
                [
                    format_number(point.sweep_value),
                    summary.scheme.value,
                    format_number(summary.mean_sum_rate),
                    format_number(summary.stderr),
                    format_number(summary.trials),
                    format_number(summary.gap_vs_jbpda_percent),
                ]
            )
    return rows


def trace_rows(trace: ConvergenceTrace) -> list[list[str]]:
    return [
        [str(i), format_number(raw), format_number(best), str(running)]
        for i, (raw, best, running) in enumerate(
            zip(trace.mean_sum_rate, trace.mean_best_sum_rate, trace.trials_running), 1
        )
    ]


def manifest_summary(report: AggregateReport) -> dict:
    """Per-point extras that do not fit the CSV columns."""
    return {
        "sweep_axis": report.sweep_axis.value,
        "points": [
            {
                "sweep_value": point.sweep_value,
                "schemes": {
                    s.scheme.value: {
                        "mean_sum_rate_bps_hz": s.mean_sum_rate,
                        "min_sum_rate_bps_hz": s.min_sum_rate,
                        "max_sum_rate_bps_hz": s.max_sum_rate,
                        "mean_throughput_bps": s.mean_throughput_bps,
                        "mean_haps_served": s.mean_haps_served,
                        "mean_matched": s.mean_matched,
                        "mean_wall_time_s": s.mean_wall_time_s,
                        "mean_iterations": s.mean_iterations,
                        "converged_fraction": s.converged_fraction,
                    }
                    for s in point.summaries
                },
            }
            for point in report.points
        ],
    }


def emit_results(
    report: AggregateReport, manifest: RunManifest, out_dir: str | Path, name: str, trace: bool = False
) -> list[Path]:
    """
    Write ``<out_dir>/<name>.csv`` and ``<out_dir>/manifest.json``.

    With ``trace`` the JBPDA convergence trace goes to ``<name>.csv`` and the
    per-scheme table to ``<name>_summary.csv``.

    Raises:
        OSError: If the directory or a file cannot be written
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    if trace:
        convergence = report.points[0].convergence if report.points else None
        trace_path = out / f"{name}.csv"
        _write_csv(trace_path, TRACE_COLUMNS, trace_rows(convergence) if convergence else [])
        written.append(trace_path)
        results_path = out / f"{name}_summary.csv"
    else:
        results_path = out / f"{name}.csv"
    _write_csv(results_path, RESULT_COLUMNS, result_rows(report))
    written.append(results_path)

    manifest_path = out / MANIFEST_NAME
    manifest.output_paths = [str(p) for p in (*written, manifest_path)]
    manifest.summary = manifest_summary(report)
    manifest_path.write_text(manifest.to_json(), encoding="utf-8")
    written.append(manifest_path)

    logger.info(f"Wrote {', '.join(str(p) for p in written)}")
    return written
