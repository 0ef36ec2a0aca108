from .proportion import jeffreys_ci, agresti_caffo_diff_ci
from .comparison import (
    SplitComparisonRow,
    PairSummary,
    SplitComparisonReport,
    compare_chains,
)

__all__ = [
    "jeffreys_ci",
    "agresti_caffo_diff_ci",
    "SplitComparisonRow",
    "PairSummary",
    "SplitComparisonReport",
    "compare_chains",
]
