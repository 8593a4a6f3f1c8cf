from __future__ import annotations as __future_annotations__

import dataclasses
import logging
from pathlib import Path
from typing import TYPE_CHECKING, Any

from .. import envs
from ..devicemap import VariationParams, generate_statistical_map, save_device_map
from ..model import config_from_mapping
from ..model.__utils__ import load_yaml_or_json
from .__types__ import SubCommand

if TYPE_CHECKING:
    from argparse import Namespace, _SubParsersAction

logger = logging.getLogger(__name__)


def _to_mapping(value: str | None) -> dict[str, Any]:
    # A YAML/JSON file, or an inline key=value;... string.
    if not value:
        return {}
    path = Path(value).expanduser()
    if path.is_file():
        return load_yaml_or_json(path)
    return envs.to_dict(value)


class GenerateMapSubCommand(SubCommand):
    """
    Command to generate a statistical weak-cell map.
    """

    output: str

    @staticmethod
    def register(parser: _SubParsersAction):
        genmap_parser = parser.add_parser(
            "genmap",
            help="Generate a statistical weak-cell map",
        )

        genmap_parser.add_argument(
            "--geometry",
            "-g",
            type=str,
            help="Geometry as a YAML/JSON file or key=value;..., e.g. banks_per_rank=1;rows_per_bank=1024",
        )
        genmap_parser.add_argument(
            "--params",
            "-p",
            type=str,
            help="Variation parameters as a YAML/JSON file or key=value;..., e.g. density=0.01;fraction_strong=0.9",
        )
        genmap_parser.add_argument(
            "--seed",
            "-s",
            type=int,
            help="Generator seed, overrides the seed in --params",
        )
        genmap_parser.add_argument(
            "--output",
            "-o",
            type=str,
            required=True,
            help="Map file to write",
        )

        genmap_parser.set_defaults(func=GenerateMapSubCommand)

    def __init__(self, args: Namespace):
        self.geometry = config_from_mapping(_to_mapping(args.geometry)).geometry
        params = VariationParams.from_mapping(_to_mapping(args.params), "params")
        if args.seed is not None:
            params = dataclasses.replace(params, seed=args.seed)
        self.params = params
        self.output = args.output

    def run(self):
        device_map = generate_statistical_map(self.geometry, self.params)
        save_device_map(device_map, self.output)
        logger.info(
            "Wrote %d weak cell(s) over %d row(s) to %s",
            device_map.weak_cell_count(),
            device_map.weak_row_count(),
            self.output,
        )
