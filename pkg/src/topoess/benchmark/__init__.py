from .runner import (
    BenchmarkConfig,
    BenchmarkRecord,
    BenchmarkReport,
    BenchmarkRunner,
    SummaryItems,
    select_items,
    standard_errors,
    nruns_bruteforce,
    run_benchmark,
    round_ess,
)
from .normal import CalibrationReport, run_normal_calibration, random_walk_metropolis

__all__ = [
    "BenchmarkConfig",
    "BenchmarkRecord",
    "BenchmarkReport",
    "BenchmarkRunner",
    "SummaryItems",
    "select_items",
    "standard_errors",
    "nruns_bruteforce",
    "run_benchmark",
    "round_ess",
    "CalibrationReport",
    "run_normal_calibration",
    "random_walk_metropolis",
]
