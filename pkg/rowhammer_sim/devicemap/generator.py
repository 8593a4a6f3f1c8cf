from __future__ import annotations as __future_annotations__

import logging
import math
from typing import TYPE_CHECKING

import numpy as np

from ..model import ConfigError, DeviceGeometry
from ..simulator.rng import CounterRng
from .__types__ import CellKey, DeviceMap, VariationParams

if TYPE_CHECKING:
    from collections.abc import Sequence

logger = logging.getLogger(__name__)

_CANDIDATES_PER_CELL = 4
"""
Cluster draws per wanted cell before falling back to uniform fill-up.
"""

_AR_BLOCK_DECAY = 500.0
"""
Decay, in units of the correlation length, covered by one vectorized AR(1) block;
keeps the rescaled partial sums finite.
"""


def _normals(rng: CounterRng, key: Sequence[int], count: int) -> np.ndarray:
    """
    Draw standard normals by the Box-Muller transform, two lanes per value.
    """
    lanes = 2 * np.arange(count, dtype=np.int64)
    radius = np.sqrt(-2.0 * np.log(rng.open_uniforms(key, lanes)))
    return radius * np.cos(2.0 * math.pi * rng.uniforms(key, lanes + 1))


def _row_field(rng: CounterRng, rank: int, bank: int, rows: int, correlation_length: float) -> np.ndarray:
    """
    Draw a stationary AR(1) Gaussian field over the row index,
    unit variance with lag-1 correlation exp(-1/correlation_length).
    """
    noise = _normals(rng, (rank, bank), rows)
    a = math.exp(-1.0 / correlation_length) if correlation_length > 0 else 0.0
    if a < np.finfo(np.float64).eps:
        return noise

    # Within a block, x[s + j] = a^(j + 1) * (x[s - 1] + sum_{i <= j} b * n[s + i] / a^(i + 1)).
    b = math.sqrt(1.0 - a * a)
    block = max(1, min(rows, int(_AR_BLOCK_DECAY * correlation_length)))
    powers = a ** np.arange(1, block + 1, dtype=np.float64)
    field = np.empty(rows, dtype=np.float64)
    field[0] = noise[0]
    for start in range(1, rows, block):
        chunk = b * noise[start : start + block]
        scale = powers[: len(chunk)]
        field[start : start + len(chunk)] = scale * (field[start - 1] + np.cumsum(chunk / scale))
    return field


def _row_cells(
    rngs: tuple[CounterRng, CounterRng, CounterRng],
    key: CellKey,
    count: int,
    columns: int,
    params: VariationParams,
) -> list[int]:
    center_rng, cluster_rng, fill_rng = rngs
    picked = np.empty(0, dtype=np.int64)

    if params.cluster_spread > 0:
        clusters = max(1, math.ceil(count / params.cluster_size))
        centers = np.floor(center_rng.uniforms(key, np.arange(clusters)) * columns)
        draws = count * _CANDIDATES_PER_CELL
        offsets = _normals(cluster_rng, key, draws) * params.cluster_spread
        cols = np.clip(np.rint(centers[np.arange(draws) % clusters] + offsets), 0, columns - 1).astype(np.int64)
        # First `count` distinct columns in draw order.
        distinct, first = np.unique(cols, return_index=True)
        picked = distinct[np.argsort(first, kind="stable")[:count]]

    if len(picked) < count:
        # Uniform placement, also tops up crowded clusters.
        order = np.argsort(fill_rng.uniforms(key, np.arange(columns)), kind="stable")
        order = order[~np.isin(order, picked)]
        picked = np.concatenate((picked, order[: count - len(picked)]))
    return sorted(int(c) for c in picked)


def generate_statistical_map(
    geometry: DeviceGeometry,
    params: VariationParams,
) -> DeviceMap:
    """
    Generate a weak-cell map from a spatially correlated vulnerability model.

    Every (rank, bank) draws a correlated Gaussian level per row,
    the highest `1 - fraction_strong` of rows become weak,
    and the device-wide target of `density` weak cells is spread
    evenly over them, placed in Gaussian clusters along the row.

    Args:
        geometry:
            Geometry to generate for.
        params:
            Generator parameters.

    Returns:
        The generated map, a pure function of the inputs.

    Raises:
        ConfigError:
            If the geometry or parameters are invalid.

    """
    geometry.validate()
    params.validate()
    if geometry.rows_per_bank < 1:
        raise ConfigError("rows_per_bank", "degenerate geometry")

    rows = geometry.rows_per_bank
    columns = geometry.columns_per_row
    entries: dict[CellKey, list[int]] = {}
    if params.density <= 0 or params.fraction_strong >= 1:
        return DeviceMap(geometry, entries)

    field_rng = CounterRng(params.seed, "devicemap.rows")
    rngs = (
        CounterRng(params.seed, "devicemap.centers"),
        CounterRng(params.seed, "devicemap.clusters"),
        CounterRng(params.seed, "devicemap.fill"),
    )
    weak_rows = round((1.0 - params.fraction_strong) * rows)
    target = round(params.density * rows * columns)
    if weak_rows == 0 or target == 0:
        return DeviceMap(geometry, entries)
    if target > weak_rows * columns:
        logger.warning(
            "Density %g needs %d cells per bank but %d weak rows hold at most %d, capping",
            params.density,
            target,
            weak_rows,
            weak_rows * columns,
        )
        target = weak_rows * columns

    base, extra = divmod(target, weak_rows)
    for rank in range(geometry.ranks_per_channel):
        for bank in range(geometry.banks_per_rank):
            field = _row_field(field_rng, rank, bank, rows, params.correlation_length)
            chosen = np.sort(np.argsort(-field, kind="stable")[:weak_rows])
            for i, row in enumerate(chosen):
                count = base + (1 if i < extra else 0)
                if count == 0:
                    continue
                key = (rank, bank, int(row))
                entries[key] = _row_cells(rngs, key, count, columns, params)

    device_map = DeviceMap(geometry, entries)
    logger.debug(
        "Generated %d weak cell(s) over %d row(s) with seed %d",
        device_map.weak_cell_count(),
        device_map.weak_row_count(),
        params.seed,
    )
    return device_map
