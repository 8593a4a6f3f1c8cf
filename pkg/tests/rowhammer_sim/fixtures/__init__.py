from __future__ import annotations as __future_annotations__

import json
from importlib import resources
from typing import Any

from rowhammer_sim.model import SimConfig, config_from_mapping

__all__ = ["SMALL_DEVICE", "load", "resolve_load_path", "small_config"]

SMALL_DEVICE: dict[str, Any] = {
    "banks_per_rank": 1,
    "rows_per_bank": 64,
    "columns_per_row": 64,
    "bytes_per_row": 64,
    "t_refi": 1_000,
    "t_refw": 64_000,
}
"""
One bank of 64 rows of 64 bytes, 64 REFs of one row per 64 ns window.
"""


def load(filename: str, callback: callable | None = None) -> list[tuple]:
    """
    Load a fixture file and return its content as a list.

    :param filename: The name of the fixture file to load.
    :param callback: A callback function to process the loaded data.
    :return: The content of the fixture file as a list.
    """
    data_path = resources.files(__package__).joinpath(filename)
    with data_path.open("r", encoding="utf-8") as f:
        data = json.load(f)

    if callback:
        return callback(data)
    return data


def resolve_load_path(filename: str) -> str:
    """
    Return the absolute path of a fixture file.
    """
    return str(resources.files(__package__).joinpath(filename))


def small_config(**overrides: Any) -> SimConfig:
    """
    Build a configuration on the small device, with options overridden.
    """
    return config_from_mapping({**SMALL_DEVICE, **overrides})
