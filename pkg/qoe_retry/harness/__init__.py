from .compare import ComparisonReport, SeedComparison, SeedFailure, compare, sweep
from .config import RunConfig, build_run_config, load_run_config
from .session import RunMetrics, run_session

__all__ = [
    "ComparisonReport",
    "RunConfig",
    "RunMetrics",
    "SeedComparison",
    "SeedFailure",
    "build_run_config",
    "compare",
    "load_run_config",
    "run_session",
    "sweep",
]
