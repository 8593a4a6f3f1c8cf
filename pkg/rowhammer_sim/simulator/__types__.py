from __future__ import annotations as __future_annotations__

from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING

from dataclasses_json import dataclass_json

from ..ecc.__types__ import EccOutcome, EccStats
from ..model import DeviceAddress

if TYPE_CHECKING:
    from ..model import SimConfig


class PatternClassEnum(str, Enum):
    """
    Enum for hammering patterns seen by a victim.
    """

    SINGLE_SIDED = "single_sided"
    """
    One flank of the victim is active.
    """
    DOUBLE_SIDED = "double_sided"
    """
    Both flanks of the victim are active.
    """
    HALF_DOUBLE = "half_double"
    """
    A row two away hammers through an active row in between.
    """

    def __str__(self):
        return self.value


PATTERN_CLASSES: tuple[PatternClassEnum, ...] = tuple(PatternClassEnum)

_PATTERN_STRENGTH = {
    PatternClassEnum.SINGLE_SIDED: 0,
    PatternClassEnum.HALF_DOUBLE: 1,
    PatternClassEnum.DOUBLE_SIDED: 2,
}


def stronger_pattern(a: PatternClassEnum | None, b: PatternClassEnum) -> PatternClassEnum:
    """
    Return the stronger of two patterns, ordered single < half-double < double.
    """
    if a is None or _PATTERN_STRENGTH[b] > _PATTERN_STRENGTH[a]:
        return b
    return a


@dataclass(frozen=True)
class PatternProbabilities:
    """
    Bitflip probability per activation per weak cell, by pattern.
    """

    single_sided: float = 0.0
    double_sided: float = 0.0
    half_double: float = 0.0

    @classmethod
    def from_config(cls, config: SimConfig) -> PatternProbabilities:
        return cls(
            single_sided=config.single_sided_prob,
            double_sided=config.double_sided_prob,
            half_double=config.half_double_prob,
        )

    def for_pattern(self, pattern: PatternClassEnum) -> float:
        match pattern:
            case PatternClassEnum.DOUBLE_SIDED:
                return self.double_sided
            case PatternClassEnum.HALF_DOUBLE:
                return self.half_double
        return self.single_sided

    def any(self) -> bool:
        return self.single_sided > 0 or self.double_sided > 0 or self.half_double > 0


class CommandKindEnum(str, Enum):
    """
    Enum for DRAM commands.
    """

    ACT = "ACT"
    RD = "RD"
    WR = "WR"
    REF = "REF"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Command:
    """
    A timed DRAM command.
    REF is scoped to a rank and leaves `address` unset.
    """

    tick: int
    """
    Issue time in picoseconds.
    """
    kind: CommandKindEnum
    address: DeviceAddress | None = None
    """
    Target of ACT, RD and WR.
    """
    channel: int = 0
    """
    Channel of a REF.
    """
    rank: int = 0
    """
    Rank of a REF.
    """
    payload: bytes | None = None
    """
    Data of a WR, written from the addressed column onward.
    """

    @staticmethod
    def act(tick: int, rank: int, bank: int, row: int, channel: int = 0) -> Command:
        return Command(
            tick,
            CommandKindEnum.ACT,
            DeviceAddress(channel=channel, rank=rank, bank=bank, row=row),
        )

    @staticmethod
    def read(
        tick: int,
        rank: int,
        bank: int,
        row: int,
        column: int = 0,
        channel: int = 0,
    ) -> Command:
        return Command(
            tick,
            CommandKindEnum.RD,
            DeviceAddress(channel=channel, rank=rank, bank=bank, row=row, column=column),
        )

    @staticmethod
    def write(
        tick: int,
        rank: int,
        bank: int,
        row: int,
        column: int,
        payload: bytes,
        channel: int = 0,
    ) -> Command:
        return Command(
            tick,
            CommandKindEnum.WR,
            DeviceAddress(channel=channel, rank=rank, bank=bank, row=row, column=column),
            payload=payload,
        )

    @staticmethod
    def refresh(tick: int, rank: int, channel: int = 0) -> Command:
        return Command(tick, CommandKindEnum.REF, channel=channel, rank=rank)


@dataclass_json
@dataclass(frozen=True, order=True)
class BitflipRecord:
    """
    An injected bitflip.
    """

    tick: int
    channel: int
    rank: int
    bank: int
    row: int
    """
    Victim row.
    """
    column: int
    """
    Bit index within the row.
    """
    pattern: PatternClassEnum


@dataclass
class BankHammerState:
    """
    Hammer counters of one bank within the current refresh window.
    """

    channel: int = 0
    rank: int = 0
    bank: int = 0
    window: int = 0
    """
    Index of the refresh window the counters pertain to.
    """
    acts: dict[int, int] = field(default_factory=dict)
    """
    Row to ACT count in the current window.
    """
    exposure: dict[int, int] = field(default_factory=dict)
    """
    Victim row to neighbour evaluations since the window start
    or since its last TRR refresh.
    """
    evals: dict[int, int] = field(default_factory=dict)
    """
    Victim row to evaluation ordinal in the current window, keys the RNG.
    """
    flipped: dict[int, set[int]] = field(default_factory=dict)
    """
    Row to flipped bit indices, persisting across windows.
    """

    @property
    def key(self) -> tuple[int, int, int]:
        return self.channel, self.rank, self.bank


@dataclass(frozen=True)
class RefreshRecord:
    """
    Rows refreshed by one REF.
    """

    tick: int
    channel: int
    rank: int
    rows: tuple[int, ...]
    """
    Rows refreshed round-robin in every bank of the rank.
    """
    trr_victims: tuple[tuple[int, int], ...] = ()
    """
    (bank, row) victims refreshed by the mitigation.
    """


@dataclass(frozen=True)
class ReadResult:
    """
    Data returned by a read.
    """

    data: bytes
    """
    The 8-byte word holding the addressed column, corrected when ECC is on.
    """
    outcome: EccOutcome | None = None
    """
    Decode outcome, None without ECC.
    """


@dataclass_json
@dataclass
class WindowReport:
    """
    Aggregates of one refresh window.
    """

    window: int
    activations: int = 0
    bitflips: int = 0
    single_sided: int = 0
    double_sided: int = 0
    half_double: int = 0
    trr_refreshes: int = 0

    def count(self, pattern: PatternClassEnum):
        self.bitflips += 1
        setattr(self, str(pattern), getattr(self, str(pattern)) + 1)


@dataclass_json
@dataclass
class SimReport:
    """
    Result of a simulation run.
    """

    total_bitflips: int = 0
    single_sided: int = 0
    double_sided: int = 0
    half_double: int = 0
    activations: int = 0
    reads: int = 0
    writes: int = 0
    refreshes: int = 0
    trr_refreshes: int = 0
    ecc: EccStats = field(default_factory=EccStats)
    windows: list[WindowReport] = field(default_factory=list)

    def count(self, pattern: PatternClassEnum):
        self.total_bitflips += 1
        setattr(self, str(pattern), getattr(self, str(pattern)) + 1)

    def bitflips_by_pattern(self) -> dict[str, int]:
        return {str(p): getattr(self, str(p)) for p in PATTERN_CLASSES}
