from __future__ import annotations as __future_annotations__

import dataclasses
import logging
from pathlib import Path
from typing import TYPE_CHECKING, Any

from .__types__ import (
    ConfigError,
    DeviceGeometry,
    MappingSchemeEnum,
    SimConfig,
    TimingParams,
    TrrVariantEnum,
)
from .__utils__ import load_yaml_or_json, to_bool, to_float, to_int, to_path
from .mapping import get_mapping

if TYPE_CHECKING:
    from collections.abc import Callable, Mapping

logger = logging.getLogger(__name__)

_GEOMETRY_KEYS = tuple(f.name for f in dataclasses.fields(DeviceGeometry))
_TIMING_KEYS = tuple(f.name for f in dataclasses.fields(TimingParams))


def _to_trr_variant(name: str, value: Any, _: Path | None) -> TrrVariantEnum:
    try:
        return TrrVariantEnum(str(value).strip().lower())
    except ValueError:
        choices = [str(v) for v in TrrVariantEnum]
        raise ConfigError(name, f"expected one of {choices}, got {value!r}") from None


def _to_address_mapping(name: str, value: Any, _: Path | None) -> str:
    scheme = str(value).strip()
    get_mapping(scheme)
    try:
        return MappingSchemeEnum(scheme)
    except ValueError:
        # Registered at runtime, kept by name.
        return scheme


def _to_str(name: str, value: Any, _: Path | None) -> str:
    if not isinstance(value, str) or not value.strip():
        raise ConfigError(name, f"expected a non-empty string, got {value!r}")
    return value.strip()


def _to_traffic(name: str, value: Any, _: Path | None):
    from ..traffic.__types__ import parse_traffic_spec  # noqa: PLC0415

    if value is None:
        return None
    return parse_traffic_spec(value, field_name=name)


def _to_variation(name: str, value: Any, _: Path | None):
    from ..devicemap.__types__ import VariationParams  # noqa: PLC0415

    if value is None:
        return None
    return VariationParams.from_mapping(value, field_name=name)


def _optional_int(name: str, value: Any, _: Path | None) -> int | None:
    if value is None:
        return None
    return to_int(name, value)


_PARSERS: dict[str, Callable[[str, Any, Path | None], Any]] = {
    # Simulation
    "device_file": to_path,
    "rowhammer_threshold": lambda n, v, _: to_int(n, v),
    "single_sided_prob": lambda n, v, _: to_float(n, v),
    "double_sided_prob": lambda n, v, _: to_float(n, v),
    "half_double_prob": lambda n, v, _: to_float(n, v),
    "trr_variant": _to_trr_variant,
    "trr_threshold": lambda n, v, _: to_int(n, v),
    "companion_threshold": lambda n, v, _: to_int(n, v),
    "counter_table_length": lambda n, v, _: to_int(n, v),
    "companion_table_length": lambda n, v, _: to_int(n, v),
    "enable_memory_corruption": lambda n, v, _: to_bool(n, v),
    "enable_ecc": lambda n, v, _: to_bool(n, v),
    "p_matrix": to_path,
    "ecc_algorithm": _to_str,
    "trr_stats_dump": to_path,
    "rh_stat_file": to_path,
    "synthetic_traffic": _to_traffic,
    # Simulator
    "rng_seed": lambda n, v, _: to_int(n, v),
    "address_mapping": _to_address_mapping,
    "auto_refresh": lambda n, v, _: to_bool(n, v),
    "fill_pattern": lambda n, v, _: to_int(n, v),
    "trr_persist_tables": lambda n, v, _: to_bool(n, v),
    "variation": _to_variation,
    # Geometry
    **{k: (lambda n, v, _: to_int(n, v)) for k in _GEOMETRY_KEYS},
    # Timing
    **{
        k: (_optional_int if k == "rows_refreshed_per_refi" else (lambda n, v, _: to_int(n, v)))
        for k in _TIMING_KEYS
    },
}
"""
Mapping from configuration key to value parser.
"""


def available_keys() -> list[str]:
    """
    Return every accepted configuration key.
    """
    return sorted(_PARSERS.keys())


def _flatten(data: Mapping[str, Any]) -> dict[str, Any]:
    flat: dict[str, Any] = {}
    for key, value in data.items():
        key = str(key).strip()
        if key in ("geometry", "timing") and isinstance(value, dict):
            allowed = _GEOMETRY_KEYS if key == "geometry" else _TIMING_KEYS
            for sub_key, sub_value in value.items():
                sub_key = str(sub_key).strip()
                if sub_key not in allowed:
                    raise ConfigError(f"{key}.{sub_key}", "unknown key")
                flat[sub_key] = sub_value
            continue
        flat[key] = value
    return flat


def _merge(
    config: SimConfig,
    data: Mapping[str, Any],
    base: Path | None,
) -> SimConfig:
    top: dict[str, Any] = {}
    geometry: dict[str, Any] = {}
    timing: dict[str, Any] = {}
    for key, value in _flatten(data).items():
        parser = _PARSERS.get(key)
        if parser is None:
            raise ConfigError(key, "unknown key")
        parsed = parser(key, value, base)
        if key in _GEOMETRY_KEYS:
            geometry[key] = parsed
        elif key in _TIMING_KEYS:
            timing[key] = parsed
        else:
            top[key] = parsed

    if geometry:
        top["geometry"] = dataclasses.replace(config.geometry, **geometry)
    if timing:
        top["timing"] = dataclasses.replace(config.timing, **timing)
    merged = dataclasses.replace(config, **top)
    merged.validate()
    return merged


def config_from_mapping(
    data: Mapping[str, Any],
    base: Path | None = None,
) -> SimConfig:
    """
    Build a configuration from a flat mapping of option names to values,
    unspecified options keep their defaults.

    Args:
        data:
            Option names to values.
        base:
            Directory to anchor relative paths at.

    Returns:
        The validated configuration.

    Raises:
        ConfigError:
            Naming the offending option.

    """
    return _merge(SimConfig(), data, base)


def load_config(path: str | Path | None = None) -> SimConfig:
    """
    Load a simulation configuration from a YAML or JSON file,
    relative paths inside are anchored at the file's directory.

    Args:
        path:
            The configuration file, defaults apply when None.

    Returns:
        The validated configuration.

    Raises:
        FileNotFoundError:
            If the file does not exist.
        InputError:
            If the file is malformed.
        ConfigError:
            Naming the option that violates an invariant.

    """
    if path is None:
        config = SimConfig()
        config.validate()
        return config

    path = Path(path)
    data = load_yaml_or_json(path)
    config = config_from_mapping(data, base=path.parent)
    logger.debug("Loaded configuration %s with %d option(s)", path, len(data))
    return config


def apply_overrides(config: SimConfig, overrides: Mapping[str, Any]) -> SimConfig:
    """
    Apply option overrides on top of a configuration,
    relative paths are anchored at the working directory.

    Raises:
        ConfigError:
            Naming the offending option.

    """
    if not overrides:
        return config
    return _merge(config, overrides, None)


def parse_overrides(items: list[str] | None) -> dict[str, str]:
    """
    Parse `key=value` items as given on the command line.

    Raises:
        ConfigError:
            If an item carries no `=`.

    """
    overrides: dict[str, str] = {}
    for item in items or []:
        if "=" not in item:
            raise ConfigError(item, "expected key=value")
        key, value = item.split("=", 1)
        overrides[key.strip()] = value.strip()
    return overrides
