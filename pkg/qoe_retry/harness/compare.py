"""
Paired-seed comparisons and parameter sweeps.

Both sides of a comparison run with the same seed; the
frozen-frame bound is evaluated from parameters measured in the runs,
not from the nominal configuration.
"""

from __future__ import annotations

import itertools
import logging
import math
from collections.abc import Iterable, Mapping, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..analytic import (
    RetryPolicy,
    VideoModelParams,
    expected_frozen_baseline,
    frozen_bound,
    ipow,
    markov_frozen_bound,
    sufficient_condition_margin,
)
from ..errors import ConfigError, ParameterError
from ..video import packet_count
from .config import RunConfig, apply_overrides
from .session import RunMetrics, run_session

logger = logging.getLogger("qoe-retry.harness")

Z_95 = 1.959963984540054


@dataclass(slots=True)
class SeedComparison:
    seed: int
    reference: RunMetrics
    candidate: RunMetrics
    p0_hat: float
    p1_hat: float
    bound: float
    markov_bound: float
    cond10_margin: float


@dataclass(frozen=True, slots=True)
class SeedFailure:
    seed: int
    error: str


def _mean_std(values: Sequence[float]) -> tuple[float, float]:
    array = np.asarray(values, dtype=float)
    if array.size == 0:
        return math.nan, math.nan
    std = float(array.std(ddof=1)) if array.size > 1 else 0.0
    return float(array.mean()), std


@dataclass(slots=True)
class ComparisonReport:
    scenario: str
    mode: str
    reference_method: str
    candidate_method: str
    seeds: list[int]
    policy: RetryPolicy
    video: VideoModelParams
    pairs: list[SeedComparison] = field(default_factory=list)
    failures: list[SeedFailure] = field(default_factory=list)
    grid_point: dict[str, Any] = field(default_factory=dict)

    def _values(self, side: str, attribute: str) -> list[float]:
        return [getattr(getattr(pair, side), attribute) for pair in self.pairs]

    def frozen_fractions(self, side: str) -> list[float]:
        return [getattr(pair, side).frozen.fraction for pair in self.pairs]

    def frozen_frames(self, side: str) -> list[float]:
        return [getattr(pair, side).frozen.frozen for pair in self.pairs]

    def frozen_fraction_stats(self, side: str) -> tuple[float, float]:
        return _mean_std(self.frozen_fractions(side))

    def attempts(self, side: str) -> list[float]:
        return self._values(side, "attempts_total")

    def measured_p(self, side: str) -> list[float]:
        return self._values(side, "measured_p")

    @property
    def reduction(self) -> float:
        reference, _ = self.frozen_fraction_stats("reference")
        candidate, _ = self.frozen_fraction_stats("candidate")
        if not reference:
            return 0.0 if candidate == reference else math.nan
        return 1.0 - candidate / reference

    @property
    def attempts_ratio(self) -> float:
        reference = np.mean(self.attempts("reference")) if self.pairs else math.nan
        candidate = np.mean(self.attempts("candidate")) if self.pairs else math.nan
        return float(candidate / reference) if reference else math.nan

    def paired_difference(self) -> tuple[float, float]:
        """Mean of reference minus candidate frozen fraction and its 95% half-width."""
        diffs = [
            pair.reference.frozen.fraction - pair.candidate.frozen.fraction for pair in self.pairs
        ]
        mean, std = _mean_std(diffs)
        if len(diffs) < 2:
            return mean, math.inf
        return mean, Z_95 * std / math.sqrt(len(diffs))

    @property
    def aggregate_p0(self) -> float:
        return float(np.mean([pair.p0_hat for pair in self.pairs])) if self.pairs else math.nan

    @property
    def aggregate_p_hat(self) -> float:
        return float(np.mean(self.measured_p("candidate"))) if self.pairs else math.nan

    @property
    def aggregate_bound(self) -> float:
        """Bound evaluated at parameters averaged over the seeds."""
        if not self.pairs:
            return math.nan
        n = float(np.mean([pair.reference.packets_total for pair in self.pairs]))
        return _bound(n, self.aggregate_p0, ipow(self.aggregate_p_hat, self.policy.r1), self.video)

    @property
    def aggregate_margin(self) -> float:
        return _margin(self.aggregate_p_hat, self.policy, self.video)

    def station_throughputs(self, side: str) -> dict[int, tuple[str, float]]:
        """Mean throughput per station in bytes per second (dcf mode)."""
        rows: dict[int, list[float]] = {}
        roles: dict[int, str] = {}
        for pair in self.pairs:
            for station in getattr(pair, side).stations:
                rows.setdefault(station.station, []).append(station.throughput_Bps)
                roles[station.station] = station.role
        return {station: (roles[station], float(np.mean(values))) for station, values in sorted(rows.items())}

    def throughput_deltas(self) -> dict[int, float]:
        """Relative throughput change of each non-video station, candidate vs reference."""
        reference = self.station_throughputs("reference")
        candidate = self.station_throughputs("candidate")
        deltas: dict[int, float] = {}
        for station, (role, value) in reference.items():
            if role == "video" or station not in candidate:
                continue
            deltas[station] = (candidate[station][1] - value) / value if value else 0.0
        return deltas

    def delay_percentiles(self, side: str, quantiles: Sequence[float] = (50.0, 90.0, 99.0)) -> dict[float, float]:
        delays = [delay for pair in self.pairs for delay in getattr(pair, side).video_delays_ms]
        if not delays:
            return {q: math.nan for q in quantiles}
        values = np.percentile(np.asarray(delays, dtype=float), list(quantiles))
        return {q: float(v) for q, v in zip(quantiles, values)}


def bootstrap_reduction_change(
    earlier: tuple[np.ndarray, np.ndarray],
    later: tuple[np.ndarray, np.ndarray],
    resamples: int = 2000,
    seed: int = 0,
) -> tuple[float, float, float]:
    """
    Change in relative reduction from earlier to later with a 95% paired bootstrap interval.

    Each argument is (reference, candidate) frozen fractions aligned by seed;
    both points are resampled with the same seed indices.

    Returns:
        (change, low, high)
    """
    reference_a, candidate_a = (np.asarray(values, dtype=float) for values in earlier)
    reference_b, candidate_b = (np.asarray(values, dtype=float) for values in later)
    size = reference_a.size
    if size == 0 or not (candidate_a.size == reference_b.size == candidate_b.size == size):
        raise ParameterError("bootstrap needs equally sized, non-empty seed-aligned samples")

    def reduction(reference: np.ndarray, candidate: np.ndarray) -> np.ndarray:
        reference_mean = reference.mean(axis=-1)
        candidate_mean = candidate.mean(axis=-1)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(reference_mean > 0, 1.0 - candidate_mean / reference_mean, np.nan)

    change = float(reduction(reference_b, candidate_b) - reduction(reference_a, candidate_a))
    index = np.random.default_rng(seed).integers(0, size, size=(resamples, size))
    samples = reduction(reference_b[index], candidate_b[index]) - reduction(reference_a[index], candidate_a[index])
    samples = samples[~np.isnan(samples)]
    if samples.size == 0:
        return change, math.nan, math.nan
    low, high = np.percentile(samples, [2.5, 97.5])
    return change, float(low), float(high)


def shared_seed_fractions(
    earlier: ComparisonReport, later: ComparisonReport
) -> tuple[tuple[np.ndarray, np.ndarray], tuple[np.ndarray, np.ndarray]]:
    """Frozen fractions of both reports restricted to the seeds they share, in seed order."""
    by_seed_a = {pair.seed: pair for pair in earlier.pairs}
    by_seed_b = {pair.seed: pair for pair in later.pairs}
    seeds = sorted(set(by_seed_a) & set(by_seed_b))

    def fractions(pairs: dict[int, SeedComparison]) -> tuple[np.ndarray, np.ndarray]:
        reference = np.array([pairs[seed].reference.frozen.fraction for seed in seeds], dtype=float)
        candidate = np.array([pairs[seed].candidate.frozen.fraction for seed in seeds], dtype=float)
        return reference, candidate

    return fractions(by_seed_a), fractions(by_seed_b)


def _bound(n: float, p0: float, p1: float, params: VideoModelParams) -> float:
    try:
        n_f = expected_frozen_baseline(p0, n, params.big_d)
        return frozen_bound(n_f, p0, p1, params)
    except ParameterError:
        return math.nan


def _margin(p: float, policy: RetryPolicy, params: VideoModelParams) -> float:
    try:
        return sufficient_condition_margin(p, policy, params)
    except ParameterError:
        return math.nan


def video_params(config: RunConfig, run: RunMetrics | None = None) -> VideoModelParams:
    """Packets per IDR and P frame, measured from a run when it yields valid values."""
    if run is not None:
        d, d_prime = round(run.d_hat), round(run.d_prime_hat)
        if d > d_prime >= 1:
            return VideoModelParams(d=d, d_prime=d_prime, big_d=config.big_d)
    mtu = config.video.mtu_payload
    d = packet_count(config.video.idr_bytes, mtu)
    d_prime = packet_count(config.video.p_bytes, mtu)
    if d <= d_prime:
        d = d_prime + 1
    return VideoModelParams(d=d, d_prime=d_prime, big_d=config.big_d)


def run_pair(reference: RunConfig, candidate: RunConfig, seed: int) -> SeedComparison:
    ref_run = run_session(reference.with_seed(seed))
    cand_run = run_session(candidate.with_seed(seed))
    policy = candidate.retry_policy()
    params = video_params(reference, ref_run)
    p0_hat = ref_run.drop_rate
    p1_hat = ipow(cand_run.measured_p, policy.r1)
    try:
        markov = markov_frozen_bound(cand_run.packets_total, params, p1_hat)
    except ParameterError:
        markov = math.nan
    return SeedComparison(
        seed=seed,
        reference=ref_run,
        candidate=cand_run,
        p0_hat=p0_hat,
        p1_hat=p1_hat,
        bound=_bound(ref_run.packets_total, p0_hat, p1_hat, params),
        markov_bound=markov,
        cond10_margin=_margin(cand_run.measured_p, policy, params),
    )


def _check_pair(reference: RunConfig, candidate: RunConfig) -> None:
    ignored = {"method", "seed"}
    if reference.model_dump(exclude=ignored) != candidate.model_dump(exclude=ignored):
        raise ConfigError("compared configs must differ only in method")


def compare(
    config_pair: tuple[RunConfig, RunConfig],
    seeds: Iterable[int],
    workers: int = 1,
) -> ComparisonReport:
    """
    Run both configs on every seed and collect a paired report.

    A failing seed is logged and recorded in report.failures; the other
    seeds still run. Results are reduced in seed order whatever the
    worker count.
    """
    reference, candidate = config_pair
    _check_pair(reference, candidate)
    seed_list = list(seeds)
    report = ComparisonReport(
        scenario=reference.name,
        mode=reference.mode,
        reference_method=reference.method,
        candidate_method=candidate.method,
        seeds=seed_list,
        policy=candidate.retry_policy(),
        video=video_params(reference),
    )

    if workers > 1 and len(seed_list) > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            futures = [executor.submit(run_pair, reference, candidate, seed) for seed in seed_list]
            outcomes = []
            for seed, future in zip(seed_list, futures):
                try:
                    outcomes.append(future.result())
                except Exception as exc:
                    outcomes.append(SeedFailure(seed, str(exc)))
    else:
        outcomes = []
        for seed in seed_list:
            try:
                outcomes.append(run_pair(reference, candidate, seed))
            except Exception as exc:
                outcomes.append(SeedFailure(seed, str(exc)))

    for outcome in outcomes:
        if isinstance(outcome, SeedFailure):
            logger.warning(f"{reference.name}: seed {outcome.seed} failed: {outcome.error}")
            report.failures.append(outcome)
        else:
            report.pairs.append(outcome)

    if report.pairs:
        report.video = video_params(reference, report.pairs[0].reference)
    logger.info(
        f"{reference.name}: {len(report.pairs)} seeds, reduction {report.reduction:.3f}, "
        f"attempts ratio {report.attempts_ratio:.4f}"
    )
    return report


def grid_points(grid: Mapping[str, Sequence[Any]]) -> list[dict[str, Any]]:
    if not grid:
        return []
    keys = list(grid)
    return [dict(zip(keys, values)) for values in itertools.product(*(grid[key] for key in keys))]


def sweep(
    base_config: RunConfig,
    grid: Mapping[str, Sequence[Any]],
    seeds: Iterable[int],
    workers: int = 1,
) -> list[ComparisonReport]:
    """One baseline-vs-proposed comparison per grid point; an empty grid gives no reports."""
    seed_list = list(seeds)
    reports: list[ComparisonReport] = []
    for point in grid_points(grid):
        label = ";".join(f"{key}={value}" for key, value in point.items())
        config = apply_overrides(base_config, point).model_copy(update={"name": f"{base_config.name}[{label}]"})
        report = compare((config.with_method("baseline"), config.with_method("proposed")), seed_list, workers)
        report.grid_point = dict(point)
        reports.append(report)
    return reports
