from __future__ import annotations as __future_annotations__

from typing import TYPE_CHECKING

from ..model import AddressError

if TYPE_CHECKING:
    from collections.abc import Iterator

    from ..model import DeviceAddress, DeviceGeometry

RowKey = tuple[int, int, int, int]
"""
(channel, rank, bank, row) of a materialized row.
"""


class MemoryImage:
    """
    Sparse contents of the simulated device.

    Rows are materialized on first write or flip,
    untouched rows read as the fill pattern.
    Bit `c` of a row is bit `c % 8` of byte `c // 8`, little-endian within the byte.
    """

    geometry: DeviceGeometry
    fill_pattern: int

    def __init__(self, geometry: DeviceGeometry, fill_pattern: int = 0xFF):
        self.geometry = geometry
        self.fill_pattern = fill_pattern
        self._rows: dict[RowKey, bytearray] = {}

    def _materialize(self, key: RowKey) -> bytearray:
        buf = self._rows.get(key)
        if buf is None:
            buf = bytearray([self.fill_pattern]) * self.geometry.bytes_per_row
            self._rows[key] = buf
        return buf

    def _span(self, offset: int, length: int):
        if length < 0 or offset < 0 or offset + length > self.geometry.bytes_per_row:
            msg = (
                f"access of {length} byte(s) at offset {offset} "
                f"overflows the {self.geometry.bytes_per_row}-byte row"
            )
            raise AddressError(msg)

    def offset_of(self, address: DeviceAddress) -> int:
        """
        Return the byte offset of an address' column within its row.
        """
        return address.column * self.geometry.column_bytes

    def write_bytes(self, key: RowKey, offset: int, data: bytes):
        """
        Store bytes at a byte offset of a row.

        Raises:
            AddressError:
                If the data does not fit in the row.

        """
        self._span(offset, len(data))
        self._materialize(key)[offset : offset + len(data)] = data

    def read_bytes(self, key: RowKey, offset: int, length: int) -> bytes:
        """
        Return the current bytes at a byte offset of a row.

        Raises:
            AddressError:
                If the span does not fit in the row.

        """
        self._span(offset, length)
        buf = self._rows.get(key)
        if buf is None:
            return bytes([self.fill_pattern]) * length
        return bytes(buf[offset : offset + length])

    def write(self, address: DeviceAddress, data: bytes):
        """
        Store bytes from the addressed column onward,
        overwriting any flipped bit they cover.

        Raises:
            AddressError:
                If the data runs past the end of the row.

        """
        key = (address.channel, address.rank, address.bank, address.row)
        self.write_bytes(key, self.offset_of(address), data)

    def read(self, address: DeviceAddress, length: int) -> bytes:
        """
        Return `length` bytes from the addressed column onward.

        Raises:
            AddressError:
                If the span runs past the end of the row.

        """
        key = (address.channel, address.rank, address.bank, address.row)
        return self.read_bytes(key, self.offset_of(address), length)

    def apply_flip(self, rank: int, bank: int, row: int, column: int, channel: int = 0):
        """
        Toggle one bit of a row.

        Raises:
            AddressError:
                If the column is not a bit of the row.

        """
        if not 0 <= column < self.geometry.columns_per_row:
            msg = f"column {column} out of range [0, {self.geometry.columns_per_row})"
            raise AddressError(msg)
        buf = self._materialize((channel, rank, bank, row))
        buf[column // 8] ^= 1 << (column % 8)

    def touched_rows(self) -> list[RowKey]:
        return sorted(self._rows.keys())

    def __len__(self) -> int:
        return len(self._rows)

    def hexdump(self, width: int = 32) -> Iterator[str]:
        """
        Render every materialized row as hex lines,
        `<channel>:<rank>:<bank>:<row> +<offset> <hex bytes>`.
        """
        for key in self.touched_rows():
            buf = self._rows[key]
            prefix = ":".join(str(k) for k in key)
            for offset in range(0, len(buf), width):
                yield f"{prefix} +{offset:06x} {buf[offset : offset + width].hex()}"
