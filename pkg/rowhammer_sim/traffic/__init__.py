from __future__ import annotations as __future_annotations__

from .__types__ import TrafficPatternEnum, TrafficSpec, parse_traffic_spec
from .generator import generate
from .trace import (
    format_command,
    iter_trace,
    parse_trace,
    parse_trace_line,
    read_trace,
    to_byte_address,
    write_trace,
)

__all__ = [
    "TrafficPatternEnum",
    "TrafficSpec",
    "format_command",
    "generate",
    "iter_trace",
    "parse_trace",
    "parse_trace_line",
    "parse_traffic_spec",
    "read_trace",
    "to_byte_address",
    "write_trace",
]
