"""
Command-line front end.

Subcommands:
    analytic   evaluate the analytic model for one parameter set
    simulate   run a single seeded session
    compare    baseline vs proposed over paired seeds
    sweep      compare over a parameter grid

Exit codes: 0 success, 1 configuration error, 2 acceptance-gate failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any

from dotenv import load_dotenv

from ..analytic import RetryPolicy
from ..config import get_settings
from ..errors import ConfigError, GateFailure, ParameterError
from ..runtime_paths import get_scenario_path
from . import gates
from .analytic_report import AnalyticReportParams, analytic_report
from .compare import ComparisonReport, compare, sweep
from .config import RunConfig, build_run_config, load_run_config, parse_policy
from .report import summary_frame, to_csv_text, write_frame, write_reports
from .session import run_session

logger = logging.getLogger("qoe-retry.cli")

DEFAULT_SCENARIO = "scenario2"
DETERMINISM_SEEDS = 10


def parse_seeds(text: str | None, default_count: int) -> list[int]:
    """'100' -> 0..99, '3,5,8' -> [3, 5, 8], '10-19' -> 10..19."""
    if text is None:
        return list(range(default_count))
    text = text.strip()
    try:
        if "," in text:
            return [int(part) for part in text.split(",") if part.strip()]
        if "-" in text:
            start, end = (int(part) for part in text.split("-", 1))
            if end < start:
                raise ConfigError(f"Invalid seed range: '{text}'")
            return list(range(start, end + 1))
        count = int(text)
    except ValueError as exc:
        raise ConfigError(f"Invalid --seeds value: '{text}'") from exc
    if count < 1:
        raise ConfigError(f"--seeds must be at least 1, got {count}")
    return list(range(count))


def parse_grid(items: list[str] | None) -> dict[str, list[Any]]:
    """KEY=V1,V2 items; policy values are written 8/7/1."""
    grid: dict[str, list[Any]] = {}
    for item in items or []:
        if "=" not in item:
            raise ConfigError(f"Grid item must look like KEY=V1,V2: '{item}'")
        key, raw = item.split("=", 1)
        key = key.strip()
        values = [value.strip() for value in raw.split(",") if value.strip()]
        if not values:
            raise ConfigError(f"Grid dimension '{key}' has no values")
        if key == "policy":
            grid[key] = [parse_policy(value) for value in values]
        elif key == "saturated_stations":
            grid[key] = [int(value) for value in values]
        else:
            try:
                grid[key] = [float(value) for value in values]
            except ValueError as exc:
                raise ConfigError(f"Grid dimension '{key}' needs numeric values") from exc
    return grid


def resolve_config(args: argparse.Namespace) -> RunConfig:
    name = args.config or DEFAULT_SCENARIO
    path = Path(name)
    config = load_run_config(path if path.exists() else get_scenario_path(name))
    updates: dict[str, Any] = {}
    if getattr(args, "mode", None):
        updates["mode"] = args.mode
    if getattr(args, "method", None):
        updates["method"] = args.method
    if getattr(args, "seed", None) is not None:
        updates["seed"] = args.seed
    if updates:
        config = build_run_config({**config.model_dump(), **updates})
    return config


def _add_output_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", type=Path, default=None, help="Report directory (default: QOE_RETRY_OUT_DIR)")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--gate", action="store_true", help="Evaluate acceptance gates; exit 2 on failure")


def _add_run_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", default=None, help="Run config file or bundled scenario name")
    parser.add_argument("--mode", choices=("abstract", "dcf"), default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qoe-retry", description="QoE-driven MAC retry-limit experiments")
    parser.add_argument("--log-level", default=None, help="Override QOE_RETRY_LOG_LEVEL")
    subparsers = parser.add_subparsers(dest="command", required=True)

    analytic = subparsers.add_parser("analytic", help="Evaluate the analytic model")
    analytic.add_argument("--p", type=float, default=0.45)
    analytic.add_argument("--p-tilde", type=float, default=None)
    analytic.add_argument("--d", type=int, default=10)
    analytic.add_argument("--d-prime", type=int, default=2)
    analytic.add_argument("--big-d", type=int, default=3)
    analytic.add_argument("--n-frames", type=int, default=295)
    analytic.add_argument("--policy", default="8,7,1", help="Retry limits R1,R2,R3 (R2 is the baseline limit)")
    _add_output_flags(analytic)

    simulate = subparsers.add_parser("simulate", help="Run one session")
    _add_run_flags(simulate)
    simulate.add_argument("--method", choices=("baseline", "proposed"), default=None)
    simulate.add_argument("--seed", type=int, default=None)
    _add_output_flags(simulate)

    for name, help_text in (("compare", "Baseline vs proposed over paired seeds"), ("sweep", "Compare over a grid")):
        sub = subparsers.add_parser(name, help=help_text)
        _add_run_flags(sub)
        sub.add_argument("--seeds", default=None, help="Seed count, list (1,2,3) or range (0-99)")
        sub.add_argument("--workers", type=int, default=None)
        _add_output_flags(sub)
        if name == "sweep":
            sub.add_argument(
                "--grid",
                action="append",
                help="Grid dimension KEY=V1,V2 (p, loss_rate, rtt_ms, policy, saturated_stations)",
            )
    return parser


def _run_analytic(args: argparse.Namespace, out_dir: Path) -> list[gates.GateResult]:
    r1, r2, r3 = parse_policy(args.policy)
    params = AnalyticReportParams(
        p=args.p,
        p_tilde=args.p if args.p_tilde is None else args.p_tilde,
        d=args.d,
        d_prime=args.d_prime,
        big_d=args.big_d,
        n_frames=args.n_frames,
        policy=RetryPolicy(r1=r1, r2=r2, r3=r3, r_base=r2),
    )
    table = analytic_report(params)
    print(table.to_string(index=False))
    if args.out is not None:
        write_frame(table, out_dir / "analytic", args.format)
    return gates.analytic_gates() if args.gate else []


def _run_simulate(args: argparse.Namespace, out_dir: Path) -> list[gates.GateResult]:
    config = resolve_config(args)
    metrics = run_session(config)
    summary = {
        "scenario": config.name,
        "mode": config.mode,
        "method": config.method,
        "seed": config.seed,
        "frozen_frames": metrics.frozen.frozen,
        "total_frames": metrics.frozen.total,
        "frozen_fraction": metrics.frozen.fraction,
        "frozen_intervals": list(metrics.frozen.intervals),
        "packets_by_priority": list(metrics.packets_by_priority),
        "frames_by_priority": list(metrics.frames_by_priority),
        "attempts": metrics.attempts_total,
        "drops": metrics.drops_total,
        "backlog": metrics.backlog_packets,
        "measured_p": metrics.measured_p,
        "idr_frames": metrics.idr_frames_generated,
    }
    print(json.dumps(summary, indent=2))
    if args.out is not None:
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / f"simulate_{config.name}_{config.method}_{config.seed}.json").write_text(
            json.dumps(summary, indent=2) + "\n", encoding="utf-8"
        )
    return [gates.gate_scheduler_properties()] if args.gate else []


def _compare_gates(config: RunConfig, report: ComparisonReport, workers: int) -> list[gates.GateResult]:
    pair = (config.with_method("baseline"), config.with_method("proposed"))
    results = [gates.gate_determinism(pair, report.seeds[:DETERMINISM_SEEDS], workers)]
    if config.mode == "dcf":
        results.append(gates.gate_dcf_neutrality(report))
    else:
        results += [gates.gate_frozen_reduction(report), gates.gate_compatibility(report)]
    return results


def _run_compare(args: argparse.Namespace, out_dir: Path, settings) -> list[gates.GateResult]:
    config = resolve_config(args)
    seeds = parse_seeds(args.seeds, settings.default_seeds)
    workers = args.workers or settings.workers
    report = compare((config.with_method("baseline"), config.with_method("proposed")), seeds, workers)
    write_reports([report], out_dir, args.format, stem=f"compare_{config.name}")
    print(to_csv_text(summary_frame([report])), end="")
    return _compare_gates(config, report, workers) if args.gate else []


def _run_sweep(args: argparse.Namespace, out_dir: Path, settings) -> list[gates.GateResult]:
    config = resolve_config(args)
    grid = parse_grid(args.grid)
    seeds = parse_seeds(args.seeds, settings.default_seeds)
    reports = sweep(config, grid, seeds, args.workers or settings.workers)
    write_reports(reports, out_dir, args.format, stem=f"sweep_{config.name}")
    if reports:
        print(to_csv_text(summary_frame(reports)), end="")
    if not args.gate:
        return []
    results = []
    if "rtt_ms" in grid:
        results.append(gates.gate_rtt_sweep(reports))
    if config.mode == "dcf":
        results.append(gates.gate_bianchi_validation())
    return results


def main(argv: list[str] | None = None) -> int:
    load_dotenv()
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        settings = get_settings()
    except ValueError as exc:
        print(f"Configuration error: {exc}", file=sys.stderr)
        return 1

    logging.basicConfig(
        level=(args.log_level or settings.log_level).upper(),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )
    out_dir = args.out if args.out is not None else settings.out_dir
    logger.debug(f"Settings: {settings}")

    handlers = {
        "analytic": lambda: _run_analytic(args, out_dir),
        "simulate": lambda: _run_simulate(args, out_dir),
        "compare": lambda: _run_compare(args, out_dir, settings),
        "sweep": lambda: _run_sweep(args, out_dir, settings),
    }
    try:
        results = handlers[args.command]()
        if results:
            gates.require_gates(results)
    except (ConfigError, ParameterError) as exc:
        logger.error(f"Configuration error: {exc}")
        print(f"Configuration error: {exc}", file=sys.stderr)
        return 1
    except GateFailure as exc:
        print(str(exc), file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
