"""Sample variable values for Samp programs, shown next to the source lines."""

from ._samp import (
    RuntimeError,
    StaleTraceError,
    SyntaxError,
    Trace,
    TraceError,
    annotate,
    is_stale,
    line_vars,
    load_trace,
    record,
    render,
    run,
)

__all__ = [
    "RuntimeError",
    "StaleTraceError",
    "SyntaxError",
    "Trace",
    "TraceError",
    "annotate",
    "is_stale",
    "line_vars",
    "load_trace",
    "record",
    "render",
    "run",
]
