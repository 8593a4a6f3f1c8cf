from __future__ import annotations as __future_annotations__

from .analyze import AnalyzeSubCommand, parse_grid
from .devicemap import GenerateMapSubCommand
from .ecc import EccCheckSubCommand, random_words
from .metrics import CompareSubCommand, RenderSubCommand, load_distribution
from .simulate import SimulateSubCommand, TrafficSubCommand, load_commands

__all__ = [
    "AnalyzeSubCommand",
    "CompareSubCommand",
    "EccCheckSubCommand",
    "GenerateMapSubCommand",
    "RenderSubCommand",
    "SimulateSubCommand",
    "TrafficSubCommand",
    "load_commands",
    "load_distribution",
    "parse_grid",
    "random_words",
]
