from __future__ import annotations as __future_annotations__

import dataclasses
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any

import numpy as np
from dataclasses_json import dataclass_json

from .. import envs
from ..model import ConfigError, DeviceGeometry, DeviceMapError
from ..model.__utils__ import to_float, to_int

if TYPE_CHECKING:
    from collections.abc import Iterable, Iterator, Mapping

CellKey = tuple[int, int, int]
"""
(rank, bank, row) of a weak row.
"""


class DeviceMap:
    """
    Weak-cell map: the bit columns that can flip, per (rank, bank, row).
    Rows absent from the map are strong and never flip.
    The map is shared by every channel of the geometry.
    """

    geometry: DeviceGeometry
    """
    Geometry the map was validated against.
    """

    def __init__(
        self,
        geometry: DeviceGeometry,
        entries: Mapping[CellKey, Iterable[int]] | None = None,
    ):
        self.geometry = geometry
        self._entries: dict[CellKey, tuple[int, ...]] = {}
        self._arrays: dict[CellKey, np.ndarray] = {}
        for key, columns in (entries or {}).items():
            cols = tuple(sorted(set(columns)))
            if not cols:
                continue
            self._check(key, cols)
            self._entries[key] = cols

    def _check(self, key: CellKey, columns: tuple[int, ...]):
        rank, bank, row = key
        g = self.geometry
        for name, value, bound in (
            ("rank", rank, g.ranks_per_channel),
            ("bank", bank, g.banks_per_rank),
            ("row", row, g.rows_per_bank),
        ):
            if not 0 <= value < bound:
                msg = f"{name} out of range: {value} not in [0, {bound})"
                raise DeviceMapError(msg)
        if columns[0] < 0 or columns[-1] >= g.columns_per_row:
            bad = columns[0] if columns[0] < 0 else columns[-1]
            msg = (
                f"column out of range: {bad} not in [0, {g.columns_per_row}) "
                f"at rank {rank} bank {bank} row {row}"
            )
            raise DeviceMapError(msg)

    def weak_columns(self, rank: int, bank: int, row: int) -> tuple[int, ...]:
        """
        Return the sorted weak columns of a row, empty for strong rows.
        """
        return self._entries.get((rank, bank, row), ())

    def weak_array(self, rank: int, bank: int, row: int) -> np.ndarray:
        """
        Return the weak columns of a row as an int64 array.
        """
        key = (rank, bank, row)
        arr = self._arrays.get(key)
        if arr is None:
            arr = np.asarray(self._entries.get(key, ()), dtype=np.int64)
            self._arrays[key] = arr
        return arr

    def is_weak(self, rank: int, bank: int, row: int) -> bool:
        return (rank, bank, row) in self._entries

    def rows(self) -> list[CellKey]:
        """
        Return the weak rows in ascending order.
        """
        return sorted(self._entries.keys())

    def items(self) -> Iterator[tuple[CellKey, tuple[int, ...]]]:
        for key in self.rows():
            yield key, self._entries[key]

    def cells(self) -> Iterator[tuple[int, int, int, int]]:
        """
        Iterate every weak cell as (rank, bank, row, column).
        """
        for (rank, bank, row), columns in self.items():
            for column in columns:
                yield rank, bank, row, column

    def weak_cell_count(self) -> int:
        return sum(len(cols) for cols in self._entries.values())

    def weak_row_count(self) -> int:
        return len(self._entries)

    def coverage(self) -> float:
        """
        Fraction of the geometry's rows that hold weak cells.
        """
        g = self.geometry
        total = g.ranks_per_channel * g.banks_per_rank * g.rows_per_bank
        return len(self._entries) / total

    def density(self) -> float:
        """
        Fraction of the geometry's cells that are weak.
        """
        g = self.geometry
        total = g.ranks_per_channel * g.banks_per_rank * g.rows_per_bank * g.columns_per_row
        return self.weak_cell_count() / total

    def __len__(self) -> int:
        return len(self._entries)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, DeviceMap) and self._entries == other._entries

    def __hash__(self) -> int:
        return hash(tuple(self.items()))

    def __repr__(self) -> str:
        return f"DeviceMap(rows={self.weak_row_count()}, cells={self.weak_cell_count()})"


@dataclass_json
@dataclass(frozen=True)
class VariationParams:
    """
    Parameters of the statistical weak-cell generator.
    """

    density: float = 0.01
    """
    Mean fraction of weak cells over the whole device.
    """
    correlation_length: float = 16.0
    """
    Spatial correlation length of the per-row vulnerability, in rows,
    0 draws every row independently.
    """
    cluster_spread: float = 4.0
    """
    Standard deviation of weak columns around a cluster center, in columns,
    0 places columns uniformly.
    """
    fraction_strong: float = 0.9
    """
    Fraction of rows with no weak cell.
    """
    seed: int = 0
    """
    Seed of the generator.
    """
    cluster_size: int = 8
    """
    Mean number of weak cells per cluster.
    """

    def validate(self, field_name: str = "variation"):
        """
        Raises:
            ConfigError:
                Naming the offending parameter.

        """
        for name in ("density", "fraction_strong"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ConfigError(f"{field_name}.{name}", f"must be within [0, 1], got {value}")
        for name in ("correlation_length", "cluster_spread"):
            value = getattr(self, name)
            if value < 0:
                raise ConfigError(f"{field_name}.{name}", f"must be >= 0, got {value}")
        if self.cluster_size < 1:
            raise ConfigError(
                f"{field_name}.cluster_size",
                f"must be >= 1, got {self.cluster_size}",
            )

    @classmethod
    def from_mapping(
        cls,
        value: Mapping[str, Any] | str,
        field_name: str = "variation",
    ) -> VariationParams:
        """
        Build parameters from a mapping or an inline `key=value;...` string.

        Raises:
            ConfigError:
                Naming the offending parameter.

        """
        if isinstance(value, str):
            value = envs.to_dict(value)
        if not isinstance(value, dict):
            raise ConfigError(field_name, f"expected a mapping, got {value!r}")

        known = {f.name for f in dataclasses.fields(cls)}
        kwargs: dict[str, Any] = {}
        for key, raw in value.items():
            name = f"{field_name}.{key}"
            if key not in known:
                raise ConfigError(name, "unknown key")
            if key in ("seed", "cluster_size"):
                kwargs[key] = to_int(name, raw)
            else:
                kwargs[key] = to_float(name, raw)
        params = cls(**kwargs)
        params.validate(field_name)
        return params
