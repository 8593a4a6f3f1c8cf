from __future__ import annotations as __future_annotations__

from abc import ABC, abstractmethod

from .__types__ import (
    AddressError,
    ConfigError,
    DeviceAddress,
    DeviceGeometry,
    MappingSchemeEnum,
)

_FIELDS = ("channel", "rank", "bank", "row", "column")


def _radix(geometry: DeviceGeometry, name: str) -> int:
    match name:
        case "channel":
            return geometry.channels
        case "rank":
            return geometry.ranks_per_channel
        case "bank":
            return geometry.banks_per_rank
        case "row":
            return geometry.rows_per_bank
        case "column":
            return geometry.access_columns
    msg = f"unknown address field {name!r}"
    raise ValueError(msg)


class AddressMapping(ABC):
    """
    Base class for byte-address to device-coordinate mappings.
    """

    name: str
    """
    Identifier of the scheme, as used by the `address_mapping` option.
    """

    def __init__(self, name: str):
        self.name = name

    @abstractmethod
    def decode(self, addr: int, geometry: DeviceGeometry) -> DeviceAddress:
        """
        Decode a byte address.

        Args:
            addr:
                Byte address, below the device capacity.
            geometry:
                Geometry to decode against.

        Returns:
            The device address of the column holding the byte.

        Raises:
            AddressError:
                If the address is out of range.

        """
        raise NotImplementedError

    @abstractmethod
    def encode(self, da: DeviceAddress, geometry: DeviceGeometry) -> int:
        """
        Encode device coordinates to the byte address of the column start.

        Raises:
            AddressError:
                If a coordinate is out of range.

        """
        raise NotImplementedError


class FieldOrderMapping(AddressMapping):
    """
    Mixed-radix interleave of the address fields in a fixed order,
    below the byte offset inside a column.
    With power-of-two sizes this is plain bit slicing.
    """

    order: tuple[str, ...]
    """
    Fields from the most to the least significant digit.
    """

    def __init__(self, name: str, order: tuple[str, ...]):
        if sorted(order) != sorted(_FIELDS):
            msg = f"mapping {name!r} must order exactly the fields {_FIELDS}"
            raise ValueError(msg)
        super().__init__(name)
        self.order = order

    def decode(self, addr: int, geometry: DeviceGeometry) -> DeviceAddress:
        if not 0 <= addr < geometry.capacity:
            msg = f"address {addr:#x} out of range [0, {geometry.capacity:#x})"
            raise AddressError(msg)

        rest = addr // geometry.column_bytes
        fields: dict[str, int] = {}
        for name in reversed(self.order):
            rest, fields[name] = divmod(rest, _radix(geometry, name))
        return DeviceAddress(**fields)

    def encode(self, da: DeviceAddress, geometry: DeviceGeometry) -> int:
        da.validate(geometry)

        addr = 0
        for name in self.order:
            addr = addr * _radix(geometry, name) + getattr(da, name)
        return addr * geometry.column_bytes


_MAPPINGS: dict[str, AddressMapping] = {
    str(MappingSchemeEnum.ROW_BANK_RANK_CHANNEL_COLUMN): FieldOrderMapping(
        str(MappingSchemeEnum.ROW_BANK_RANK_CHANNEL_COLUMN),
        ("row", "bank", "rank", "channel", "column"),
    ),
    str(MappingSchemeEnum.ROW_COLUMN_RANK_BANK_CHANNEL): FieldOrderMapping(
        str(MappingSchemeEnum.ROW_COLUMN_RANK_BANK_CHANNEL),
        ("row", "column", "rank", "bank", "channel"),
    ),
}
"""
Mapping from scheme identifier to mapping.
"""


def register_mapping(mapping: AddressMapping):
    """
    Register an additional mapping scheme, replacing any of the same name.
    """
    _MAPPINGS[mapping.name] = mapping


def available_mappings() -> list[str]:
    """
    Return the identifiers of all registered mapping schemes.
    """
    return list(_MAPPINGS.keys())


def get_mapping(scheme: str | MappingSchemeEnum) -> AddressMapping:
    """
    Look up a mapping scheme.

    Raises:
        ConfigError:
            If the scheme is not registered.

    """
    mapping = _MAPPINGS.get(str(scheme))
    if mapping is None:
        msg = f"unknown scheme {str(scheme)!r}, expected one of {available_mappings()}"
        raise ConfigError("address_mapping", msg)
    return mapping


def decode_address(
    addr: int,
    geometry: DeviceGeometry,
    scheme: str | MappingSchemeEnum = MappingSchemeEnum.ROW_BANK_RANK_CHANNEL_COLUMN,
) -> DeviceAddress:
    """
    Decode a byte address to device coordinates with the named scheme.
    """
    return get_mapping(scheme).decode(addr, geometry)


def encode_address(
    da: DeviceAddress,
    geometry: DeviceGeometry,
    scheme: str | MappingSchemeEnum = MappingSchemeEnum.ROW_BANK_RANK_CHANNEL_COLUMN,
) -> int:
    """
    Encode device coordinates to a byte address with the named scheme.
    """
    return get_mapping(scheme).encode(da, geometry)
