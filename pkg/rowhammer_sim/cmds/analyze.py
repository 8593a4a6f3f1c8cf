from __future__ import annotations as __future_annotations__

import logging
import sys
from typing import TYPE_CHECKING

from ..analyzer import (
    default_probability_grid,
    estimate_bitflips,
    windowize,
    write_sweep_csv,
    write_windows_csv,
)
from ..devicemap import load_device_map
from ..model import ConfigError
from ..model.__utils__ import to_float
from ..simulator import PatternClassEnum
from ..traffic import iter_trace
from .__types__ import SubCommand, add_config_arguments, resolve_config

if TYPE_CHECKING:
    from argparse import Namespace, _SubParsersAction

logger = logging.getLogger(__name__)


def parse_grid(value: str | None) -> list[float]:
    """
    Parse a comma-separated probability grid, `default` or None for the default grid.

    Raises:
        ConfigError:
            If a value is not a probability.

    """
    if not value or value.strip() == "default":
        return default_probability_grid()
    grid = []
    for item in value.split(","):
        p = to_float("sweep", item.strip())
        if not 0.0 <= p <= 1.0:
            raise ConfigError("sweep", f"probability {p} out of [0, 1]")
        grid.append(p)
    return grid


class AnalyzeSubCommand(SubCommand):
    """
    Command to estimate bitflips of a trace offline, over a probability sweep.
    """

    trace: str
    map: str | None
    output: str | None
    windows: str | None

    @staticmethod
    def register(parser: _SubParsersAction):
        analyze_parser = parser.add_parser(
            "analyze",
            help="Estimate bitflips of a trace offline over a probability sweep",
        )
        add_config_arguments(analyze_parser)

        analyze_parser.add_argument(
            "--trace",
            "-t",
            type=str,
            required=True,
            help="Trace file to analyze",
        )
        analyze_parser.add_argument(
            "--map",
            type=str,
            help="Device map file, restricts the estimate to its weak cells",
        )
        analyze_parser.add_argument(
            "--sweep",
            type=str,
            help="Comma-separated probabilities, defaults to 1e-9 ... 1",
        )
        analyze_parser.add_argument(
            "--threshold",
            type=int,
            help="RowHammer threshold, defaults to rowhammer_threshold",
        )
        analyze_parser.add_argument(
            "--uniform-weak-cells",
            type=int,
            default=1,
            help="Weak cells per row without a map",
        )
        analyze_parser.add_argument(
            "--double-sided-factor",
            type=float,
            default=1.0,
            help="Multiplier of the swept probability for double-sided evaluations",
        )
        analyze_parser.add_argument(
            "--half-double-factor",
            type=float,
            default=1.0,
            help="Multiplier of the swept probability for half-double evaluations",
        )
        analyze_parser.add_argument(
            "--trr-replay",
            action="store_true",
            help="Replay the configured TRR variant",
        )
        analyze_parser.add_argument(
            "--output",
            "-o",
            type=str,
            help="Write the sweep CSV to this file instead of stdout",
        )
        analyze_parser.add_argument(
            "--windows",
            type=str,
            help="Write the per-window CSV to this file",
        )

        analyze_parser.set_defaults(func=AnalyzeSubCommand)

    def __init__(self, args: Namespace):
        extra = {"rowhammer_threshold": str(args.threshold)} if args.threshold is not None else None
        self.config = resolve_config(args, extra)
        self.trace = args.trace
        self.map = args.map
        self.grid = parse_grid(args.sweep)
        self.uniform_weak_cells = args.uniform_weak_cells
        if self.uniform_weak_cells < 0:
            raise ConfigError("uniform_weak_cells", f"must be >= 0, got {self.uniform_weak_cells}")
        self.multipliers = {
            PatternClassEnum.DOUBLE_SIDED: args.double_sided_factor,
            PatternClassEnum.HALF_DOUBLE: args.half_double_factor,
        }
        self.trr_replay = args.trr_replay
        self.output = args.output
        self.windows = args.windows

    def run(self):
        commands = iter_trace(self.trace, self.config.geometry, self.config.address_mapping)
        windows = windowize(commands, self.config, self.trr_replay)
        device_map = load_device_map(self.map, self.config.geometry) if self.map else None
        result = estimate_bitflips(
            windows,
            self.grid,
            device_map,
            self.config.rowhammer_threshold,
            self.uniform_weak_cells,
            self.multipliers,
        )
        logger.info(
            "%d window(s), %d threshold crossing(s) at %d",
            len(windows),
            result.crossings,
            result.threshold,
        )

        if self.windows:
            write_windows_csv(windows, self.windows)
        text = write_sweep_csv(result, self.output)
        if not self.output:
            sys.stdout.write(text)
