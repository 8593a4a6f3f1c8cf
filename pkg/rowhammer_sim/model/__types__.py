from __future__ import annotations as __future_annotations__

import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import TYPE_CHECKING

from dataclasses_json import dataclass_json

if TYPE_CHECKING:
    from ..devicemap.__types__ import VariationParams
    from ..traffic.__types__ import TrafficSpec


class SimulationError(Exception):
    """
    Base class for simulation errors.
    """


class InputError(SimulationError, ValueError):
    """
    Base class for malformed or out-of-range inputs.
    """


class ConfigError(InputError):
    """
    Invalid simulation configuration, attributed to a field.
    """

    field: str
    """
    Name of the offending configuration field.
    """

    def __init__(self, field_name: str, message: str):
        self.field = field_name
        super().__init__(f"{field_name}: {message}")


class AddressError(InputError):
    """
    Address or device coordinate out of range.
    """


class DeviceMapError(InputError):
    """
    Malformed device map.
    """


class TraceError(InputError):
    """
    Malformed trace, attributed to a line when known.
    """

    line: int | None
    """
    1-based line number of the offending record.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ParityMatrixError(InputError):
    """
    Malformed or unusable parity-check matrix.
    """

    column: int | None
    """
    Index of the offending column, if any.
    """

    def __init__(self, message: str, column: int | None = None):
        self.column = column
        super().__init__(message)


class DistributionError(InputError):
    """
    Unusable bitflip distribution.
    """


class InvariantError(SimulationError):
    """
    A checked invariant does not hold.
    """


class TrrVariantEnum(str, Enum):
    """
    Enum for TRR mitigation variants.
    """

    NONE = "none"
    """
    No mitigation.
    """
    PROBABILISTIC = "probabilistic"
    """
    Refresh the neighbours of an activated row with a fixed probability.
    """
    COUNTER = "counter"
    """
    Count activations in a bounded table, refresh neighbours at a threshold.
    """
    COMPANION = "companion"
    """
    Counter table backed by a secondary table for evicted rows.
    """

    def __str__(self):
        return self.value


class MappingSchemeEnum(str, Enum):
    """
    Enum for address mapping schemes,
    named by field order from the most to the least significant digit.
    """

    ROW_BANK_RANK_CHANNEL_COLUMN = "RoBaRaChCo"
    """
    Row, bank, rank, channel, column.
    """
    ROW_COLUMN_RANK_BANK_CHANNEL = "RoCoRaBaCh"
    """
    Row, column, rank, bank, channel.
    """

    def __str__(self):
        return self.value


@dataclass_json
@dataclass(frozen=True)
class DeviceGeometry:
    """
    Organization of the simulated device.
    """

    channels: int = 1
    """
    Number of channels.
    """
    ranks_per_channel: int = 1
    """
    Number of ranks per channel.
    """
    banks_per_rank: int = 16
    """
    Number of banks per rank.
    """
    rows_per_bank: int = 65536
    """
    Number of rows per bank.
    """
    columns_per_row: int = 1024
    """
    Number of columns per row,
    which are also the bit positions available to weak-cell maps.
    """
    bytes_per_row: int = 1024
    """
    Size of a row buffer in bytes.
    """

    def validate(self):
        """
        Validate the geometry.

        Raises:
            ConfigError:
                If any count is out of range.

        """
        for name in (
            "channels",
            "ranks_per_channel",
            "banks_per_rank",
            "rows_per_bank",
            "columns_per_row",
            "bytes_per_row",
        ):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                raise ConfigError(name, f"must be an integer >= 1, got {value!r}")
        if self.columns_per_row > self.bytes_per_row * 8:
            raise ConfigError(
                "columns_per_row",
                f"must be <= bytes_per_row * 8 ({self.bytes_per_row * 8}), got {self.columns_per_row}",
            )
        if (
            self.columns_per_row <= self.bytes_per_row
            and self.bytes_per_row % self.columns_per_row
        ):
            raise ConfigError(
                "columns_per_row",
                f"must divide bytes_per_row ({self.bytes_per_row}), got {self.columns_per_row}",
            )

    @property
    def column_bytes(self) -> int:
        """
        Width of an addressable column in bytes.
        """
        if self.columns_per_row <= self.bytes_per_row:
            return self.bytes_per_row // self.columns_per_row
        return 1

    @property
    def access_columns(self) -> int:
        """
        Number of addressable columns per row.
        """
        return self.bytes_per_row // self.column_bytes

    @property
    def capacity(self) -> int:
        """
        Total capacity of the device in bytes.
        """
        return (
            self.channels
            * self.ranks_per_channel
            * self.banks_per_rank
            * self.rows_per_bank
            * self.bytes_per_row
        )


@dataclass_json
@dataclass(frozen=True, order=True)
class DeviceAddress:
    """
    Device-level coordinates.
    """

    channel: int = 0
    rank: int = 0
    bank: int = 0
    row: int = 0
    column: int = 0

    def validate(self, geometry: DeviceGeometry):
        """
        Check the address against a geometry.

        Raises:
            AddressError:
                If any field is out of range.

        """
        bounds = (
            ("channel", self.channel, geometry.channels),
            ("rank", self.rank, geometry.ranks_per_channel),
            ("bank", self.bank, geometry.banks_per_rank),
            ("row", self.row, geometry.rows_per_bank),
            ("column", self.column, geometry.access_columns),
        )
        for name, value, bound in bounds:
            if not 0 <= value < bound:
                msg = f"{name} {value} out of range [0, {bound})"
                raise AddressError(msg)


PS_PER_US = 1_000_000
"""
Picoseconds per microsecond, the tick unit of traces.
"""


@dataclass_json
@dataclass(frozen=True)
class TimingParams:
    """
    Refresh timing, all times in picoseconds.
    """

    t_refi: int = 7_812_500
    """
    Interval between refresh commands, the nominal 7.8 us (64 ms / 8192).
    """
    t_refw: int = 64_000 * PS_PER_US
    """
    Refresh window, within which every row is refreshed once.
    32 ms is the other common choice.
    """
    rows_refreshed_per_refi: int | None = None
    """
    Rows refreshed per REF in each bank,
    derived from the geometry when unset.
    """
    max_trr_refreshes_per_refi: int = 4
    """
    Budget of TRR victim refreshes per REF,
    standing in for the time the rank stays locked during refresh.
    """

    @property
    def refis_per_window(self) -> int:
        return self.t_refw // self.t_refi

    def resolve(self, geometry: DeviceGeometry) -> TimingParams:
        """
        Return a copy with derived fields filled for the given geometry.
        """
        if self.rows_refreshed_per_refi is not None:
            return self
        per_refi = max(1, math.ceil(geometry.rows_per_bank / self.refis_per_window))
        return TimingParams(
            t_refi=self.t_refi,
            t_refw=self.t_refw,
            rows_refreshed_per_refi=per_refi,
            max_trr_refreshes_per_refi=self.max_trr_refreshes_per_refi,
        )

    def validate(self, geometry: DeviceGeometry):
        """
        Validate the timing against a geometry.

        Raises:
            ConfigError:
                If the timing is inconsistent.

        """
        if self.t_refi < 1:
            raise ConfigError("t_refi", f"must be >= 1, got {self.t_refi}")
        if self.t_refw < self.t_refi or self.t_refw % self.t_refi:
            raise ConfigError(
                "t_refw",
                f"must be an integer multiple of t_refi ({self.t_refi}), got {self.t_refw}",
            )
        if self.max_trr_refreshes_per_refi < 0:
            raise ConfigError(
                "max_trr_refreshes_per_refi",
                f"must be >= 0, got {self.max_trr_refreshes_per_refi}",
            )
        per_refi = self.resolve(geometry).rows_refreshed_per_refi
        if per_refi < 1:
            raise ConfigError(
                "rows_refreshed_per_refi",
                f"must be >= 1, got {per_refi}",
            )
        if per_refi * self.refis_per_window < geometry.rows_per_bank:
            raise ConfigError(
                "rows_refreshed_per_refi",
                f"{per_refi} rows per REF over {self.refis_per_window} REFs "
                f"cannot cover {geometry.rows_per_bank} rows within t_refw",
            )


@dataclass(frozen=True)
class SimConfig:
    """
    Full simulation configuration.
    """

    device_file: Path | None = None
    """
    Path to a device map, all rows are strong when unset.
    """
    rowhammer_threshold: int = 45_000
    """
    Victim exposure, in neighbour activations per window,
    below which no bitflip can happen.
    """
    single_sided_prob: float = 0.0
    """
    Probability per activation per weak cell of a single-sided bitflip.
    """
    double_sided_prob: float = 0.0
    """
    Probability per activation per weak cell of a double-sided bitflip.
    """
    half_double_prob: float = 0.0
    """
    Probability per activation per weak cell of a half-double bitflip.
    """
    trr_variant: TrrVariantEnum = TrrVariantEnum.NONE
    """
    Mitigation variant.
    """
    trr_threshold: int = 1000
    """
    Activation count at which a mitigation refreshes victims,
    its reciprocal is the sampling probability of the probabilistic variant.
    """
    companion_threshold: int = 1000
    """
    Activation count at which the companion table refreshes victims.
    """
    counter_table_length: int = 16
    """
    Capacity of the counter table.
    """
    companion_table_length: int = 16
    """
    Capacity of the companion table.
    """
    enable_memory_corruption: bool = False
    """
    Apply bitflips to the simulated memory contents.
    """
    enable_ecc: bool = False
    """
    Route reads through the ECC decoder.
    """
    p_matrix: Path | None = None
    """
    Path to the parity-check matrix, required with ECC.
    """
    ecc_algorithm: str = "secded72"
    """
    ECC algorithm identifier.
    """
    trr_stats_dump: Path | None = None
    """
    Path to dump per-window TRR counters to.
    """
    rh_stat_file: Path | None = None
    """
    Path to dump every bitflip to.
    """
    synthetic_traffic: TrafficSpec | None = None
    """
    Synthetic traffic to simulate when no trace is given.
    """
    rng_seed: int = 0
    """
    Seed of every random decision.
    """
    geometry: DeviceGeometry = field(default_factory=DeviceGeometry)
    """
    Device organization.
    """
    timing: TimingParams = field(default_factory=TimingParams)
    """
    Refresh timing.
    """
    address_mapping: MappingSchemeEnum = MappingSchemeEnum.ROW_BANK_RANK_CHANNEL_COLUMN
    """
    Scheme to decode byte addresses with.
    """
    auto_refresh: bool = True
    """
    Insert a REF every t_refi when the trace carries none.
    """
    fill_pattern: int = 0xFF
    """
    Byte value of never-written memory.
    """
    trr_persist_tables: bool = True
    """
    Keep TRR tables and pending victims across refresh windows.
    """
    variation: VariationParams | None = None
    """
    Parameters to generate a statistical device map with,
    used when no device file is given.
    """

    def validate(self):
        """
        Validate every invariant of the configuration.

        Raises:
            ConfigError:
                Naming the first offending field.

        """
        self.geometry.validate()
        self.timing.validate(self.geometry)
        for name in ("single_sided_prob", "double_sided_prob", "half_double_prob"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ConfigError(name, f"must be within [0, 1], got {value}")
        for name in ("rowhammer_threshold", "trr_threshold", "companion_threshold"):
            value = getattr(self, name)
            if value < 0:
                raise ConfigError(name, f"must be >= 0, got {value}")
        if self.trr_variant in (
            TrrVariantEnum.COUNTER,
            TrrVariantEnum.COMPANION,
        ) and self.counter_table_length < 1:
            raise ConfigError(
                "counter_table_length",
                f"must be >= 1, got {self.counter_table_length}",
            )
        if (
            self.trr_variant == TrrVariantEnum.COMPANION
            and self.companion_table_length < 1
        ):
            raise ConfigError(
                "companion_table_length",
                f"must be >= 1, got {self.companion_table_length}",
            )
        if self.trr_variant != TrrVariantEnum.NONE and self.trr_threshold < 1:
            raise ConfigError(
                "trr_threshold",
                f"must be >= 1 when trr_variant is {self.trr_variant}, got {self.trr_threshold}",
            )
        if self.enable_ecc and self.p_matrix is None:
            raise ConfigError("p_matrix", "is required when enable_ecc is set")
        if not 0 <= self.fill_pattern <= 0xFF:
            raise ConfigError(
                "fill_pattern",
                f"must be a byte, got {self.fill_pattern}",
            )
        if self.variation is not None:
            self.variation.validate("variation")
        if self.synthetic_traffic is not None:
            self.synthetic_traffic.validate(self.geometry, "synthetic_traffic")

    @property
    def resolved_timing(self) -> TimingParams:
        return self.timing.resolve(self.geometry)

    def with_overrides(self, overrides: dict[str, str]) -> SimConfig:
        """
        Return a copy with `key=value` overrides applied and re-validated,
        values are parsed the same way as configuration files.

        Raises:
            ConfigError:
                If a key is unknown or a value is invalid.

        """
        from .config import apply_overrides  # noqa: PLC0415

        return apply_overrides(self, overrides)
