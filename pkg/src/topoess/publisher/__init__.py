# Publisher module
from .report import ReportWriter, summarize_benchmark

__all__ = ["ReportWriter", "summarize_benchmark"]
