"""
Acceptance gates.

Formula and Markov oracles, scheduler property checks on randomized
traces, and statistical checks over comparison reports. Each gate returns
a GateResult; require_gates raises GateFailure when any of them failed.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..analytic import (
    RetryPolicy,
    VideoModelParams,
    bianchi_fixed_point,
    expected_attempts,
    expected_attempts_series,
    expected_packets_baseline,
    expected_packets_proposed,
    ipow,
    markov_transition_matrix,
    stationary_closed_form,
    stationary_numeric,
)
from ..channel import DcfConfig, DcfSimulator, StationSpec
from ..errors import GateFailure
from ..scheduler import Priority, RetryScheduler
from .compare import ComparisonReport, bootstrap_reduction_change, compare, shared_seed_fractions
from .config import RunConfig
from .report import comparison_frame, to_csv_text

logger = logging.getLogger("qoe-retry.gates")

MARKOV_GRID = {
    "d": (2, 5, 10),
    "d_prime": (1, 2, 4),
    "big_d": (1, 2, 3, 6),
    "p1": (1e-4, 0.001, 0.01, 0.1, 0.5),
}

PACKET_COUNT_GRID = {
    "d": (3, 5, 10, 20),
    "d_prime": (1, 2, 4),
    "big_d": (1, 3, 6, 12),
    "p": (0.1, 0.3, 0.4, 0.45, 0.5),
    "p_tilde_offset": (0.0, 0.02),
}


@dataclass(frozen=True, slots=True)
class GateResult:
    name: str
    passed: bool
    detail: dict[str, Any] = field(default_factory=dict)


def _markov_cases(grid: dict[str, Sequence]) -> Iterable[tuple[VideoModelParams, float]]:
    for d in grid["d"]:
        for d_prime in grid["d_prime"]:
            if d <= d_prime:
                continue
            for big_d in grid["big_d"]:
                for p1 in grid["p1"]:
                    yield VideoModelParams(d=d, d_prime=d_prime, big_d=big_d), p1


def gate_formula_oracle() -> GateResult:
    worst = 0.0
    for step in range(20):
        p = step / 20
        for r in range(1, 13):
            worst = max(worst, abs(expected_attempts(p, r) - expected_attempts_series(p, r)))
    return GateResult("formula_oracle", worst < 1e-12, {"max_abs_error": worst})


def gate_markov_oracle(grid: dict[str, Sequence] = MARKOV_GRID) -> GateResult:
    worst_error = 0.0
    worst_row = 0.0
    cases = 0
    for params, p1 in _markov_cases(grid):
        matrix = markov_transition_matrix(params, p1)
        worst_row = max(worst_row, float(np.max(np.abs(matrix.sum(axis=1) - 1.0))))
        numeric = stationary_numeric(matrix)
        closed = stationary_closed_form(params, p1).to_vector(params)
        worst_error = max(worst_error, float(np.max(np.abs(numeric - closed))))
        cases += 1
    passed = worst_error < 1e-9 and worst_row <= 1e-12
    return GateResult(
        "markov_oracle",
        passed,
        {"cases": cases, "max_component_error": worst_error, "max_row_sum_error": worst_row},
    )


def gate_packet_count(n_frames: int = 295, grid: dict[str, Sequence] = PACKET_COUNT_GRID) -> GateResult:
    """Fewer expected packets with the three-priority method at equal frame counts."""
    policy = RetryPolicy()
    violations: list[tuple] = []
    cases = 0
    for d in grid["d"]:
        for d_prime in grid["d_prime"]:
            if d <= d_prime:
                continue
            for big_d in grid["big_d"]:
                params = VideoModelParams(d=d, d_prime=d_prime, big_d=big_d)
                for p in grid["p"]:
                    for offset in grid["p_tilde_offset"]:
                        p0 = ipow(p + offset, policy.r_base)
                        if p0 * params.delta_d >= 1.0:
                            continue
                        baseline = expected_packets_baseline(n_frames, params, p0)
                        proposed = expected_packets_proposed(n_frames, params, ipow(p, policy.r1))
                        cases += 1
                        if not proposed < baseline:
                            violations.append((d, d_prime, big_d, p, offset, baseline, proposed))
    return GateResult("packet_count", not violations, {"cases": cases, "violations": violations[:5]})


class _AlwaysCompatible(RetryScheduler):
    def compatibility_ok(self) -> bool:
        return True


def _random_trace(
    scheduler: RetryScheduler, rng: np.random.Generator, n_frames: int
) -> tuple[list[Priority], list[bool], list[bool]]:
    priorities: list[Priority] = []
    idr_flags: list[bool] = []
    dropped: list[bool] = []
    p = float(rng.uniform(0.0, 0.6))
    for index in range(n_frames):
        is_idr = index == 0 or bool(rng.random() < 0.05)
        priority = scheduler.classify_frame(is_idr)
        frame_dropped = False
        for _ in range(int(rng.integers(1, 11))):
            limit = scheduler.register_packet(priority)
            first_success = int(rng.geometric(1.0 - p)) if p > 0 else 1
            delivered = first_success <= limit
            scheduler.record_transmission_result(first_success if delivered else limit, delivered, limit)
            frame_dropped = frame_dropped or not delivered
        priorities.append(priority)
        idr_flags.append(is_idr)
        dropped.append(frame_dropped)
    return priorities, idr_flags, dropped


def gate_scheduler_properties(n_traces: int = 1000, n_frames: int = 120, seed: int = 0) -> GateResult:
    rng = np.random.default_rng(seed)
    starvation = priority3 = idr_override = 0
    for _ in range(n_traces):
        priorities, idr_flags, _ = _random_trace(_AlwaysCompatible(), rng, n_frames)
        if any(priority == Priority.TWO for priority in priorities[1:]):
            starvation += 1

        priorities, idr_flags, dropped = _random_trace(RetryScheduler(), rng, n_frames)
        if any(is_idr and priority != Priority.ONE for priority, is_idr in zip(priorities, idr_flags)):
            idr_override += 1
        for index, priority in enumerate(priorities):
            if priority != Priority.THREE:
                continue
            previous = priorities[index - 1] if index else None
            if previous != Priority.THREE and not (index and dropped[index - 1]):
                priority3 += 1
                break
            following = index + 1
            if following < n_frames and priorities[following] != Priority.THREE and not idr_flags[following]:
                priority3 += 1
                break
    detail = {
        "traces": n_traces,
        "starvation_violations": starvation,
        "priority3_violations": priority3,
        "idr_violations": idr_override,
    }
    return GateResult("scheduler_properties", starvation == priority3 == idr_override == 0, detail)


def gate_frozen_reduction(report: ComparisonReport, min_reduction: float = 0.10) -> GateResult:
    diff_mean, halfwidth = report.paired_difference()
    candidate_frames = float(np.mean(report.frozen_frames("candidate"))) if report.pairs else math.nan
    bound = report.aggregate_bound
    margin = report.aggregate_margin
    below_bound = margin > 0 and candidate_frames < bound
    passed = diff_mean - halfwidth > 0 and report.reduction > min_reduction and below_bound
    return GateResult(
        "frozen_reduction",
        bool(passed),
        {
            "paired_diff_mean": diff_mean,
            "paired_diff_halfwidth": halfwidth,
            "reduction": report.reduction,
            "candidate_frozen_frames": candidate_frames,
            "bound": bound,
            "cond10_margin": margin,
        },
    )


def gate_compatibility(report: ComparisonReport, tolerance: float = 1.01) -> GateResult:
    ratio = report.attempts_ratio
    return GateResult("attempts_compatibility", ratio <= tolerance, {"attempts_ratio": ratio})


def gate_rtt_sweep(reports: Sequence[ComparisonReport], tolerance: float = 0.15, resamples: int = 2000) -> GateResult:
    """
    Baseline frozen frames track p0 * n * D, and the reduction does not shrink as D grows.

    A step between consecutive D values counts as shrinking when the whole
    95% paired bootstrap interval of the reduction change lies below zero.
    """
    ordered = sorted(reports, key=lambda report: report.video.big_d)
    rows = []
    linear_ok = True
    for report in ordered:
        n = float(np.mean([pair.reference.packets_total for pair in report.pairs]))
        predicted = report.aggregate_p0 * n * report.video.big_d
        actual = float(np.mean(report.frozen_frames("reference")))
        error = abs(actual / predicted - 1.0) if predicted else math.inf
        linear_ok = linear_ok and error <= tolerance
        rows.append({"D": report.video.big_d, "predicted": predicted, "actual": actual, "relative_error": error,
                     "reduction": report.reduction})

    steps = []
    monotone = True
    for earlier, later in zip(ordered, ordered[1:]):
        change, low, high = bootstrap_reduction_change(*shared_seed_fractions(earlier, later), resamples=resamples)
        shrinks = not math.isnan(high) and high < 0.0
        monotone = monotone and not shrinks
        steps.append({"from_D": earlier.video.big_d, "to_D": later.video.big_d, "change": change,
                      "low": low, "high": high})
    passed = bool(rows) and linear_ok and monotone
    return GateResult("rtt_sweep", passed, {"points": rows, "steps": steps, "linear": linear_ok, "monotone": monotone})


def gate_dcf_neutrality(report: ComparisonReport, throughput_tolerance: float = 0.02, p_slack: float = 0.01) -> GateResult:
    """
    Cross stations keep their throughput and the video sender does not collide more.

    Only counts when the two methods diverged: the baseline dropped video
    packets and the proposed sender ran priority-3 frames. Video packets
    still queued after the drain window also fail it.
    """
    deltas = report.throughput_deltas()
    reference_p = float(np.mean(report.measured_p("reference"))) if report.pairs else math.nan
    candidate_p = float(np.mean(report.measured_p("candidate"))) if report.pairs else math.nan
    baseline_drops = sum(pair.reference.drops_total for pair in report.pairs)
    priority3_frames = sum(pair.candidate.frames_by_priority[2] for pair in report.pairs)
    backlog = sum(pair.reference.backlog_packets + pair.candidate.backlog_packets for pair in report.pairs)
    diverged = baseline_drops > 0 and priority3_frames > 0
    throughput_ok = bool(deltas) and all(abs(delta) < throughput_tolerance for delta in deltas.values())
    p_ok = candidate_p <= reference_p + p_slack
    passed = throughput_ok and p_ok and diverged and backlog == 0
    return GateResult(
        "dcf_neutrality",
        bool(passed),
        {
            "throughput_deltas": deltas,
            "reference_p": reference_p,
            "candidate_p": candidate_p,
            "baseline_drops": baseline_drops,
            "priority3_frames": priority3_frames,
            "diverged": diverged,
            "video_backlog": backlog,
        },
    )


def gate_bianchi_validation(
    station_counts: Sequence[int] = (2, 5, 10),
    seeds: Sequence[int] = (0, 1, 2),
    slots: int = 1_000_000,
    tolerance: float = 0.10,
) -> GateResult:
    rows = []
    passed = True
    for n in station_counts:
        config = DcfConfig(stations=[StationSpec(role="saturated") for _ in range(n)])
        measured = []
        for seed in seeds:
            sim = DcfSimulator(config, seed)
            measured.append(sim.run_until(slots).measured_p)
        _, predicted = bianchi_fixed_point(n, config.cw_min + 1, config.max_backoff_stages, config.default_retry)
        mean_p = float(np.mean(measured))
        error = abs(mean_p / predicted - 1.0)
        passed = passed and error <= tolerance
        rows.append({"n": n, "measured_p": mean_p, "bianchi_p": predicted, "relative_error": error})
    return GateResult("bianchi_validation", passed, {"points": rows})


def gate_determinism(config_pair: tuple[RunConfig, RunConfig], seeds: Sequence[int], workers: int = 1) -> GateResult:
    first = to_csv_text(comparison_frame(compare(config_pair, seeds, workers)))
    second = to_csv_text(comparison_frame(compare(config_pair, seeds, workers)))
    return GateResult("determinism", first == second, {"bytes": len(first)})


def analytic_gates() -> list[GateResult]:
    return [gate_formula_oracle(), gate_markov_oracle(), gate_packet_count(), gate_scheduler_properties()]


def require_gates(results: Sequence[GateResult]) -> list[GateResult]:
    """
    Log every gate and raise when one failed.

    Raises:
        GateFailure: Listing the failed gate names
    """
    failed = []
    for result in results:
        if result.passed:
            logger.info(f"Gate {result.name}: passed {result.detail}")
        else:
            logger.warning(f"Gate {result.name}: FAILED {result.detail}")
            failed.append(result.name)
    if failed:
        raise GateFailure(f"Acceptance gates failed: {', '.join(failed)}", failed)
    return list(results)
