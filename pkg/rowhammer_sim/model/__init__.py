from __future__ import annotations as __future_annotations__

from .__types__ import (
    PS_PER_US,
    AddressError,
    ConfigError,
    DeviceAddress,
    DeviceGeometry,
    DeviceMapError,
    DistributionError,
    InputError,
    InvariantError,
    MappingSchemeEnum,
    ParityMatrixError,
    SimConfig,
    SimulationError,
    TimingParams,
    TraceError,
    TrrVariantEnum,
)
from .config import (
    apply_overrides,
    available_keys,
    config_from_mapping,
    load_config,
    parse_overrides,
)
from .mapping import (
    AddressMapping,
    FieldOrderMapping,
    available_mappings,
    decode_address,
    encode_address,
    get_mapping,
    register_mapping,
)

__all__ = [
    "PS_PER_US",
    "AddressError",
    "AddressMapping",
    "ConfigError",
    "DeviceAddress",
    "DeviceGeometry",
    "DeviceMapError",
    "DistributionError",
    "FieldOrderMapping",
    "InputError",
    "InvariantError",
    "MappingSchemeEnum",
    "ParityMatrixError",
    "SimConfig",
    "SimulationError",
    "TimingParams",
    "TraceError",
    "TrrVariantEnum",
    "apply_overrides",
    "available_keys",
    "available_mappings",
    "config_from_mapping",
    "decode_address",
    "encode_address",
    "get_mapping",
    "load_config",
    "parse_overrides",
    "register_mapping",
]
