from .bootstrap_trace import (
    TraceKind,
    TraceRow,
    block_bootstrap_trace,
    default_subsample_sizes,
    trace_frame,
)

__all__ = [
    "TraceKind",
    "TraceRow",
    "block_bootstrap_trace",
    "default_subsample_sizes",
    "trace_frame",
]
