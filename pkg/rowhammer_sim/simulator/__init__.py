from __future__ import annotations as __future_annotations__

from .__types__ import (
    PATTERN_CLASSES,
    BankHammerState,
    BitflipRecord,
    Command,
    CommandKindEnum,
    PatternClassEnum,
    PatternProbabilities,
    ReadResult,
    RefreshRecord,
    SimReport,
    WindowReport,
    stronger_pattern,
)
from .engine import Engine, format_bitflip, simulate, write_lines
from .memory import MemoryImage
from .rng import CounterRng, stream_tag
from .tracker import (
    BLAST_RADIUS,
    classify,
    evaluate_faults,
    expose,
    on_trr_refresh,
    repair,
    reset_window,
    victims_of,
)

__all__ = [
    "BLAST_RADIUS",
    "PATTERN_CLASSES",
    "BankHammerState",
    "BitflipRecord",
    "Command",
    "CommandKindEnum",
    "CounterRng",
    "Engine",
    "MemoryImage",
    "PatternClassEnum",
    "PatternProbabilities",
    "ReadResult",
    "RefreshRecord",
    "SimReport",
    "WindowReport",
    "classify",
    "evaluate_faults",
    "expose",
    "format_bitflip",
    "on_trr_refresh",
    "repair",
    "reset_window",
    "simulate",
    "stream_tag",
    "stronger_pattern",
    "victims_of",
    "write_lines",
]
