"""
Report tables.

Comparison reports become pandas frames with fixed column orders; CSV is
written with a fixed float format and line terminator so that identical
runs produce identical files.
"""

from __future__ import annotations

import json
import logging
import math
from collections.abc import Sequence
from pathlib import Path
from typing import Literal

import numpy as np
import pandas as pd

from .compare import ComparisonReport

logger = logging.getLogger("qoe-retry.report")

ReportFormat = Literal["csv", "json"]

FLOAT_FORMAT = "%.10g"

COMPARE_COLUMNS = [
    "scenario",
    "seed",
    "method",
    "frozen_frames",
    "total_frames",
    "frozen_fraction",
    "m1",
    "m2",
    "m3",
    "attempts",
    "drops",
    "backlog",
    "measured_p",
    "p0_hat",
    "bound",
    "cond10_margin",
]

THROUGHPUT_COLUMNS = [
    "station",
    "role",
    "method",
    "delivered_bytes",
    "throughput_Bps",
    "attempts",
    "collisions",
]

SUMMARY_COLUMNS = [
    "scenario",
    "seeds",
    "failures",
    "reference_method",
    "candidate_method",
    "reference_fraction_mean",
    "reference_fraction_std",
    "candidate_fraction_mean",
    "candidate_fraction_std",
    "reduction",
    "paired_diff_mean",
    "paired_diff_halfwidth",
    "attempts_ratio",
    "reference_p_mean",
    "candidate_p_mean",
    "bound",
    "markov_bound",
    "cond10_margin",
]

DELAY_COLUMNS = ["scenario", "method", "p50_ms", "p90_ms", "p99_ms"]


def _side_rows(report: ComparisonReport, side: str, method: str) -> list[dict]:
    rows = []
    for pair in report.pairs:
        run = getattr(pair, side)
        m1, m2, m3 = run.packets_by_priority
        rows.append(
            {
                "scenario": report.scenario,
                "seed": str(pair.seed),
                "method": method,
                "frozen_frames": run.frozen.frozen,
                "total_frames": run.frozen.total,
                "frozen_fraction": run.frozen.fraction,
                "m1": m1,
                "m2": m2,
                "m3": m3,
                "attempts": run.attempts_total,
                "drops": run.drops_total,
                "backlog": run.backlog_packets,
                "measured_p": run.measured_p,
                "p0_hat": pair.p0_hat,
                "bound": pair.bound,
                "cond10_margin": pair.cond10_margin,
            }
        )
    return rows


def comparison_frame(report: ComparisonReport) -> pd.DataFrame:
    """Per-seed rows for both methods followed by one aggregate row per method (seed=agg)."""
    rows = _side_rows(report, "reference", report.reference_method)
    rows += _side_rows(report, "candidate", report.candidate_method)
    frame = pd.DataFrame(rows, columns=COMPARE_COLUMNS)
    if frame.empty:
        return frame

    aggregates = []
    numeric = COMPARE_COLUMNS[3:]
    for side, method in (("reference", report.reference_method), ("candidate", report.candidate_method)):
        side_rows = pd.DataFrame(_side_rows(report, side, method), columns=COMPARE_COLUMNS)
        means = side_rows[numeric].astype(float).mean()
        aggregates.append({"scenario": report.scenario, "seed": "agg", "method": method, **means.to_dict()})
    aggregates[0]["bound"] = aggregates[1]["bound"] = report.aggregate_bound
    aggregates[0]["cond10_margin"] = aggregates[1]["cond10_margin"] = report.aggregate_margin
    return pd.concat([frame, pd.DataFrame(aggregates, columns=COMPARE_COLUMNS)], ignore_index=True)


def throughput_frame(report: ComparisonReport) -> pd.DataFrame:
    """Mean per-station counters over seeds for each method (dcf mode)."""
    rows = []
    for side, method in (("reference", report.reference_method), ("candidate", report.candidate_method)):
        per_station: dict[int, list] = {}
        for pair in report.pairs:
            for station in getattr(pair, side).stations:
                per_station.setdefault(station.station, []).append(station)
        for index, stations in sorted(per_station.items()):
            count = len(stations)
            rows.append(
                {
                    "station": index,
                    "role": stations[0].role,
                    "method": method,
                    "delivered_bytes": sum(s.delivered_bytes for s in stations) / count,
                    "throughput_Bps": sum(s.throughput_Bps for s in stations) / count,
                    "attempts": sum(s.attempts for s in stations) / count,
                    "collisions": sum(s.collisions for s in stations) / count,
                }
            )
    return pd.DataFrame(rows, columns=THROUGHPUT_COLUMNS)


def delay_frame(report: ComparisonReport) -> pd.DataFrame:
    rows = []
    for side, method in (("reference", report.reference_method), ("candidate", report.candidate_method)):
        percentiles = report.delay_percentiles(side)
        rows.append(
            {
                "scenario": report.scenario,
                "method": method,
                "p50_ms": percentiles[50.0],
                "p90_ms": percentiles[90.0],
                "p99_ms": percentiles[99.0],
            }
        )
    return pd.DataFrame(rows, columns=DELAY_COLUMNS)


def summary_frame(reports: Sequence[ComparisonReport]) -> pd.DataFrame:
    """One row per report: means with sample standard deviations over seeds."""
    rows = []
    for report in reports:
        reference_mean, reference_std = report.frozen_fraction_stats("reference")
        candidate_mean, candidate_std = report.frozen_fraction_stats("candidate")
        diff_mean, diff_halfwidth = report.paired_difference()
        rows.append(
            {
                "scenario": report.scenario,
                "seeds": len(report.pairs),
                "failures": len(report.failures),
                "reference_method": report.reference_method,
                "candidate_method": report.candidate_method,
                "reference_fraction_mean": reference_mean,
                "reference_fraction_std": reference_std,
                "candidate_fraction_mean": candidate_mean,
                "candidate_fraction_std": candidate_std,
                "reduction": report.reduction,
                "paired_diff_mean": diff_mean,
                "paired_diff_halfwidth": diff_halfwidth,
                "attempts_ratio": report.attempts_ratio,
                "reference_p_mean": _mean(report.measured_p("reference")),
                "candidate_p_mean": _mean(report.measured_p("candidate")),
                "bound": report.aggregate_bound,
                "markov_bound": _mean([pair.markov_bound for pair in report.pairs]),
                "cond10_margin": report.aggregate_margin,
            }
        )
    return pd.DataFrame(rows, columns=SUMMARY_COLUMNS)


def _mean(values: Sequence[float]) -> float:
    return float(np.mean(values)) if len(values) else math.nan


def to_csv_text(frame: pd.DataFrame) -> str:
    return frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def write_frame(frame: pd.DataFrame, path: Path, fmt: ReportFormat) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "csv":
        path = path.with_suffix(".csv")
        path.write_text(to_csv_text(frame), encoding="utf-8")
    else:
        path = path.with_suffix(".json")
        records = json.loads(frame.to_json(orient="records", double_precision=10))
        path.write_text(json.dumps(records, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
    logger.info(f"Wrote {len(frame)} rows to {path}")
    return path


def write_reports(
    reports: Sequence[ComparisonReport],
    out_dir: Path,
    fmt: ReportFormat = "csv",
    stem: str = "compare",
) -> list[Path]:
    """
    Write the per-seed table, the summary and, for dcf runs, the throughput
    and delay tables.

    Returns:
        list: Paths written
    """
    out_dir = Path(out_dir)
    written: list[Path] = []
    if not reports:
        written.append(write_frame(pd.DataFrame(columns=COMPARE_COLUMNS), out_dir / stem, fmt))
        return written

    frames = [comparison_frame(report) for report in reports]
    combined = pd.concat(frames, ignore_index=True) if len(frames) > 1 else frames[0]
    written.append(write_frame(combined, out_dir / stem, fmt))
    written.append(write_frame(summary_frame(reports), out_dir / f"{stem}_summary", fmt))

    dcf_reports = [report for report in reports if report.mode == "dcf"]
    if dcf_reports:
        throughput = pd.concat([throughput_frame(report) for report in dcf_reports], ignore_index=True)
        written.append(write_frame(throughput, out_dir / f"{stem}_throughput", fmt))
        delays = pd.concat([delay_frame(report) for report in dcf_reports], ignore_index=True)
        written.append(write_frame(delays, out_dir / f"{stem}_delay", fmt))
    return written
