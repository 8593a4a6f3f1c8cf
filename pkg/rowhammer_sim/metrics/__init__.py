from __future__ import annotations as __future_annotations__

from .__types__ import BitflipDistribution, DistributionAxisEnum, DistributionModeEnum
from .divergence import (
    DEFAULT_EPSILON,
    build_distribution,
    js_divergence,
    jsd_matrix,
    map_distribution,
    parse_bitflip_record,
    read_bitflip_records,
    write_jsd_csv,
)
from .image import (
    encode_pgm,
    grid_columns,
    grid_side,
    render_bitflip_grid,
    superimpose,
    write_pgm,
)

__all__ = [
    "DEFAULT_EPSILON",
    "BitflipDistribution",
    "DistributionAxisEnum",
    "DistributionModeEnum",
    "build_distribution",
    "encode_pgm",
    "grid_columns",
    "grid_side",
    "js_divergence",
    "jsd_matrix",
    "map_distribution",
    "parse_bitflip_record",
    "read_bitflip_records",
    "render_bitflip_grid",
    "superimpose",
    "write_jsd_csv",
    "write_pgm",
]
