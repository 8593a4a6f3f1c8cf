from __future__ import annotations as __future_annotations__

import logging
import sys
from pathlib import Path
from typing import TYPE_CHECKING

from ..devicemap import load_device_map
from ..metrics import (
    DEFAULT_EPSILON,
    DistributionAxisEnum,
    DistributionModeEnum,
    build_distribution,
    js_divergence,
    jsd_matrix,
    map_distribution,
    read_bitflip_records,
    render_bitflip_grid,
    superimpose,
    write_jsd_csv,
    write_pgm,
)
from .__types__ import SubCommand, add_config_arguments, resolve_config

if TYPE_CHECKING:
    from argparse import ArgumentParser, Namespace, _SubParsersAction

    from ..metrics import BitflipDistribution
    from ..model import DeviceGeometry

logger = logging.getLogger(__name__)


def _add_selection_arguments(parser: ArgumentParser):
    parser.add_argument("--rank", type=int, help="Only flips of this rank")
    parser.add_argument("--bank", type=int, help="Only flips of this bank")
    parser.add_argument("--row", type=int, help="Only flips of this row")


def _is_map(path: str) -> bool:
    return Path(path).suffix.lower() == ".json"


def _selected_indices(
    path: str,
    geometry: DeviceGeometry,
    axis: DistributionAxisEnum,
    rank: int | None,
    bank: int | None,
    row: int | None,
) -> list[int]:
    # Columns (or rows) of the map cells or stats records matching the selection.
    if _is_map(path):
        cells = load_device_map(path, geometry).cells()
    else:
        cells = ((r.rank, r.bank, r.row, r.column) for r in read_bitflip_records(path))
    return [
        w if axis == DistributionAxisEnum.ROW else c
        for r, b, w, c in cells
        if (rank is None or r == rank) and (bank is None or b == bank) and (row is None or w == row)
    ]


def load_distribution(
    path: str,
    geometry: DeviceGeometry,
    mode: DistributionModeEnum,
    axis: DistributionAxisEnum,
    epsilon: float = 0.0,
    rank: int | None = None,
    bank: int | None = None,
    row: int | None = None,
) -> BitflipDistribution:
    """
    Load the distribution of a map (`.json`) or a bitflip stats file.
    """
    if _is_map(path) and not epsilon:
        return map_distribution(
            load_device_map(path, geometry),
            rank,
            bank,
            row,
            label=path,
            mode=mode,
            axis=axis,
        )
    size = geometry.rows_per_bank if axis == DistributionAxisEnum.ROW else geometry.columns_per_row
    values = _selected_indices(path, geometry, axis, rank, bank, row)
    return build_distribution(values, size, mode, path, axis, epsilon)


class CompareSubCommand(SubCommand):
    """
    Command to compare bitflip distributions by Jensen-Shannon divergence.
    """

    references: list[str]
    tests: list[str]
    grid: bool
    output: str | None

    @staticmethod
    def register(parser: _SubParsersAction):
        compare_parser = parser.add_parser(
            "compare",
            help="Compare bitflip distributions of maps or stats files by JS divergence",
        )
        add_config_arguments(compare_parser)

        compare_parser.add_argument(
            "--ref",
            nargs="+",
            required=True,
            help="Reference maps (.json) or bitflip stats files",
        )
        compare_parser.add_argument(
            "--test",
            nargs="+",
            required=True,
            help="Maps (.json) or bitflip stats files to compare",
        )
        compare_parser.add_argument(
            "--mode",
            type=str,
            choices=[str(m) for m in DistributionModeEnum],
            default=str(DistributionModeEnum.FREQUENCY),
            help="Weigh indices by flip count or by whether they flipped",
        )
        compare_parser.add_argument(
            "--axis",
            type=str,
            choices=[str(a) for a in DistributionAxisEnum],
            default=str(DistributionAxisEnum.COLUMN),
            help="Compare distributions over columns or over rows",
        )
        compare_parser.add_argument(
            "--smooth",
            action="store_true",
            help=f"Add {DEFAULT_EPSILON} to every index before normalizing",
        )
        compare_parser.add_argument(
            "--grid",
            action="store_true",
            help="Emit the reference x test divergence matrix as CSV",
        )
        compare_parser.add_argument(
            "--output",
            "-o",
            type=str,
            help="Write the output to this file instead of stdout",
        )
        _add_selection_arguments(compare_parser)

        compare_parser.set_defaults(func=CompareSubCommand)

    def __init__(self, args: Namespace):
        self.geometry = resolve_config(args).geometry
        self.references = args.ref
        self.tests = args.test
        self.mode = DistributionModeEnum(args.mode)
        self.axis = DistributionAxisEnum(args.axis)
        self.epsilon = DEFAULT_EPSILON if args.smooth else 0.0
        self.selection = (args.rank, args.bank, args.row)
        self.grid = args.grid
        self.output = args.output

    def _load(self, path: str) -> BitflipDistribution:
        return load_distribution(path, self.geometry, self.mode, self.axis, self.epsilon, *self.selection)

    def run(self):
        refs = [self._load(p) for p in self.references]
        tests = [self._load(p) for p in self.tests]

        if self.grid:
            text = write_jsd_csv(jsd_matrix(refs, tests), self.references, self.tests, self.output)
        else:
            lines = [f"{r.label} {t.label} {js_divergence(r, t):.6f}" for r in refs for t in tests]
            text = "\n".join(lines) + "\n"
            if self.output:
                Path(self.output).write_text(text, encoding="utf-8")
        if not self.output:
            sys.stdout.write(text)


class RenderSubCommand(SubCommand):
    """
    Command to render flipped columns as a square grayscale grid.
    """

    inputs: list[str]
    output: str
    ascii: bool

    @staticmethod
    def register(parser: _SubParsersAction):
        render_parser = parser.add_parser(
            "render",
            help="Render flipped columns of maps or stats files as a PGM grid, superimposing inputs",
        )
        add_config_arguments(render_parser)

        render_parser.add_argument(
            "inputs",
            nargs="+",
            help="Maps (.json) or bitflip stats files",
        )
        render_parser.add_argument(
            "--output",
            "-o",
            type=str,
            required=True,
            help="PGM file to write",
        )
        render_parser.add_argument(
            "--ascii",
            action="store_true",
            help="Write a plain (P2) graymap instead of a binary (P5) one",
        )
        _add_selection_arguments(render_parser)

        render_parser.set_defaults(func=RenderSubCommand)

    def __init__(self, args: Namespace):
        self.geometry = resolve_config(args).geometry
        self.inputs = args.inputs
        self.selection = (args.rank, args.bank, args.row)
        self.output = args.output
        self.ascii = args.ascii

    def run(self):
        columns = self.geometry.columns_per_row
        grids = [
            render_bitflip_grid(
                _selected_indices(p, self.geometry, DistributionAxisEnum.COLUMN, *self.selection),
                columns,
            )
            for p in self.inputs
        ]
        write_pgm(superimpose(*grids), self.output, binary=not self.ascii)
        logger.info("Rendered %d input(s) to %s", len(grids), self.output)
