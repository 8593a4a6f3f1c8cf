from __future__ import annotations as __future_annotations__

import dataclasses
from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING, Any

from dataclasses_json import dataclass_json

from .. import envs
from ..model import ConfigError
from ..model.__utils__ import to_bool, to_int

if TYPE_CHECKING:
    from collections.abc import Mapping

    from ..model import DeviceGeometry


class TrafficPatternEnum(str, Enum):
    """
    Enum for synthetic attack patterns.
    """

    SINGLE_SIDED = "single_sided"
    """
    Hammer one aggressor, `rows[0]`.
    """
    DOUBLE_SIDED = "double_sided"
    """
    Alternate between both neighbours of the victim `rows[0]`.
    """
    N_SIDED = "n_sided"
    """
    Round-robin over the aggressors listed in `rows`.
    """
    UNIFORM_RANDOM = "uniform_random"
    """
    Seeded uniform choice among `rows`, or over the whole bank when empty.
    """

    def __str__(self):
        return self.value


@dataclass_json
@dataclass(frozen=True)
class TrafficSpec:
    """
    Synthetic attack traffic against one bank.
    """

    pattern: TrafficPatternEnum = TrafficPatternEnum.DOUBLE_SIDED
    rows: tuple[int, ...] = ()
    """
    Target rows, read according to the pattern.
    """
    acts_per_round: int = 2
    rounds: int = 1
    interval: int = 1
    """
    Ticks between consecutive commands, in picoseconds.
    """
    channel: int = 0
    rank: int = 0
    bank: int = 0
    seed: int = 0
    start_tick: int = 0
    """
    Tick of the first command.
    """
    victim_reads: bool = False
    """
    Append a read of every victim word after the attack.
    """

    @property
    def total_acts(self) -> int:
        return self.acts_per_round * self.rounds

    def aggressors(self) -> list[int]:
        """
        Return the rows hammered in turn,
        empty for uniform_random whose rows are drawn.
        """
        match self.pattern:
            case TrafficPatternEnum.SINGLE_SIDED:
                return [self.rows[0]]
            case TrafficPatternEnum.DOUBLE_SIDED:
                return [self.rows[0] - 1, self.rows[0] + 1]
            case TrafficPatternEnum.N_SIDED:
                return list(self.rows)
        return []

    def victims(self, rows_per_bank: int) -> list[int]:
        """
        Return the rows adjacent to an aggressor that are not aggressors themselves.
        """
        if self.pattern == TrafficPatternEnum.DOUBLE_SIDED:
            return [self.rows[0]]
        aggressors = set(self.aggressors())
        return sorted(
            {
                r
                for a in aggressors
                for r in (a - 1, a + 1)
                if 0 <= r < rows_per_bank and r not in aggressors
            },
        )

    def validate(self, geometry: DeviceGeometry, field_name: str = "synthetic_traffic"):
        """
        Validate the spec against a geometry.

        Raises:
            ConfigError:
                Naming the offending field.

        """
        for name, minimum in (
            ("interval", 1),
            ("acts_per_round", 1),
            ("rounds", 0),
            ("start_tick", 0),
        ):
            value = getattr(self, name)
            if value < minimum:
                raise ConfigError(f"{field_name}.{name}", f"must be >= {minimum}, got {value}")
        for name, value, bound in (
            ("channel", self.channel, geometry.channels),
            ("rank", self.rank, geometry.ranks_per_channel),
            ("bank", self.bank, geometry.banks_per_rank),
        ):
            if not 0 <= value < bound:
                raise ConfigError(f"{field_name}.{name}", f"{value} out of range [0, {bound})")

        rows_field = f"{field_name}.rows"
        for row in self.rows:
            if not 0 <= row < geometry.rows_per_bank:
                raise ConfigError(
                    rows_field,
                    f"row {row} out of range [0, {geometry.rows_per_bank})",
                )
        match self.pattern:
            case TrafficPatternEnum.SINGLE_SIDED:
                if len(self.rows) != 1:
                    raise ConfigError(rows_field, "single_sided takes exactly one aggressor row")
            case TrafficPatternEnum.DOUBLE_SIDED:
                if len(self.rows) != 1:
                    raise ConfigError(rows_field, "double_sided takes exactly one victim row")
                if not 1 <= self.rows[0] < geometry.rows_per_bank - 1:
                    raise ConfigError(rows_field, f"victim {self.rows[0]} lacks a neighbour on each side")
            case TrafficPatternEnum.N_SIDED:
                if len(self.rows) < 2:
                    raise ConfigError(rows_field, "n_sided takes at least two aggressor rows")

    @classmethod
    def from_mapping(
        cls,
        value: Mapping[str, Any] | str,
        field_name: str = "synthetic_traffic",
    ) -> TrafficSpec:
        """
        Build a spec from a mapping or an inline `key=value;...` string,
        `rows` being a list or a comma-separated string.

        Raises:
            ConfigError:
                Naming the offending field.

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
            match key:
                case "pattern":
                    try:
                        kwargs[key] = TrafficPatternEnum(str(raw).strip().lower())
                    except ValueError:
                        choices = [str(p) for p in TrafficPatternEnum]
                        raise ConfigError(name, f"expected one of {choices}, got {raw!r}") from None
                case "rows":
                    kwargs[key] = _to_rows(name, raw)
                case "victim_reads":
                    kwargs[key] = to_bool(name, raw)
                case _:
                    kwargs[key] = to_int(name, raw)
        return cls(**kwargs)


def _to_rows(name: str, value: Any) -> tuple[int, ...]:
    if value is None:
        return ()
    if isinstance(value, int) and not isinstance(value, bool):
        return (value,)
    if isinstance(value, str):
        value = [v for v in value.replace(",", " ").split() if v]
    if not isinstance(value, list | tuple):
        raise ConfigError(name, f"expected a list of rows, got {value!r}")
    return tuple(to_int(name, v) for v in value)


def parse_traffic_spec(
    value: Mapping[str, Any] | str | TrafficSpec,
    field_name: str = "synthetic_traffic",
) -> TrafficSpec:
    """
    Parse a traffic spec as given in a configuration file or on the command line.

    Raises:
        ConfigError:
            Naming the offending field.

    """
    if isinstance(value, TrafficSpec):
        return value
    return TrafficSpec.from_mapping(value, field_name)
