from __future__ import annotations as __future_annotations__

import json
import logging
from pathlib import Path
from typing import TYPE_CHECKING, Any

from ..model import DeviceGeometry, DeviceMapError
from ..model.__utils__ import read_text
from .__types__ import CellKey, DeviceMap, VariationParams
from .generator import generate_statistical_map

if TYPE_CHECKING:
    from ..model import SimConfig

logger = logging.getLogger(__package__)


def _to_index(key: Any, level: str) -> int:
    if isinstance(key, str):
        text = key.strip()
        if text.isascii() and text.isdigit():
            return int(text)
    msg = f"non-integer {level} key {key!r}"
    raise DeviceMapError(msg)


def _expect_mapping(value: Any, where: str) -> dict[str, Any]:
    if not isinstance(value, dict):
        msg = f"expected an object at {where}, got {type(value).__name__}"
        raise DeviceMapError(msg)
    return value


def parse_device_map(data: Any, geometry: DeviceGeometry) -> DeviceMap:
    """
    Build a map from the nested `{rank: {bank: {row: [columns]}}}` structure,
    keys being decimal integers encoded as strings.

    Raises:
        DeviceMapError:
            If the structure is malformed or an index is out of range.

    """
    entries: dict[CellKey, list[int]] = {}
    for rank_key, banks in _expect_mapping(data, "top level").items():
        rank = _to_index(rank_key, "rank")
        for bank_key, rows in _expect_mapping(banks, f"rank {rank}").items():
            bank = _to_index(bank_key, "bank")
            for row_key, columns in _expect_mapping(rows, f"rank {rank} bank {bank}").items():
                row = _to_index(row_key, "row")
                if not isinstance(columns, list):
                    msg = f"expected a column list at rank {rank} bank {bank} row {row}"
                    raise DeviceMapError(msg)
                for col in columns:
                    if not isinstance(col, int) or isinstance(col, bool):
                        msg = f"non-integer column {col!r} at rank {rank} bank {bank} row {row}"
                        raise DeviceMapError(msg)
                entries.setdefault((rank, bank, row), []).extend(columns)
    return DeviceMap(geometry, entries)


def load_device_map(path: str | Path, geometry: DeviceGeometry) -> DeviceMap:
    """
    Load a weak-cell map file.

    Args:
        path:
            The JSON map file.
        geometry:
            Geometry to validate against, out-of-range entries are rejected.

    Returns:
        The validated map.

    Raises:
        OSError:
            If the file cannot be read.
        DeviceMapError:
            If the file does not parse or violates the geometry.

    """
    path = Path(path)
    try:
        data = json.loads(read_text(path, DeviceMapError))
    except json.JSONDecodeError as e:
        msg = f"Failed to parse device map {path}: {e}"
        raise DeviceMapError(msg) from e
    device_map = parse_device_map(data, geometry)
    logger.debug("Loaded device map %s: %r", path, device_map)
    return device_map


def resolve_device_map(config: SimConfig) -> DeviceMap:
    """
    Return the map a configuration asks for:
    the `device_file` when set, else a map generated from `variation`,
    else an empty map where every row is strong.

    Raises:
        OSError:
            If the map file cannot be read.
        InputError:
            If the map or the generator parameters are invalid.

    """
    if config.device_file is not None:
        return load_device_map(config.device_file, config.geometry)
    if config.variation is not None:
        return generate_statistical_map(config.geometry, config.variation)
    return DeviceMap(config.geometry)


def dump_device_map(device_map: DeviceMap) -> dict[str, dict[str, dict[str, list[int]]]]:
    """
    Render a map to the nested structure, keys in ascending numeric order.
    """
    data: dict[str, dict[str, dict[str, list[int]]]] = {}
    for (rank, bank, row), columns in device_map.items():
        data.setdefault(str(rank), {}).setdefault(str(bank), {})[str(row)] = list(columns)
    return data


def save_device_map(device_map: DeviceMap, path: str | Path):
    """
    Write a weak-cell map file, byte-stable for equal maps.

    Raises:
        OSError:
            If the file cannot be written.

    """
    text = json.dumps(dump_device_map(device_map))
    Path(path).write_text(text + "\n", encoding="utf-8")


__all__ = [
    "CellKey",
    "DeviceMap",
    "VariationParams",
    "dump_device_map",
    "generate_statistical_map",
    "load_device_map",
    "parse_device_map",
    "resolve_device_map",
    "save_device_map",
]
