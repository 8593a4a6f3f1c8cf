from __future__ import annotations as __future_annotations__

import logging
from typing import TYPE_CHECKING

from ..model import ConfigError, TrrVariantEnum
from .__types__ import Mitigation, TrrStats, VictimKey
from .companion import CompanionMitigation
from .counter import CounterMitigation, evict_min
from .probabilistic import NoMitigation, ProbabilisticMitigation

if TYPE_CHECKING:
    from ..model import SimConfig

logger = logging.getLogger(__package__)

_MITIGATIONS: dict[TrrVariantEnum, type[Mitigation]] = {
    cls.variant: cls
    for cls in (
        NoMitigation,
        ProbabilisticMitigation,
        CounterMitigation,
        CompanionMitigation,
    )
}
"""
Mapping from variant to mitigation class.
"""


def available_variants() -> list[TrrVariantEnum]:
    """
    Get a list of available mitigation variants.

    Returns:
        A list of available variants.

    """
    return list(_MITIGATIONS.keys())


def create_mitigation(
    variant: TrrVariantEnum | str,
    config: SimConfig,
    channel: int = 0,
    rank: int = 0,
) -> Mitigation:
    """
    Create the mitigation of one rank.

    Args:
        variant:
            Variant to create.
        config:
            Configuration providing thresholds and table lengths.
        channel:
            Channel of the rank.
        rank:
            Rank to protect.

    Returns:
        A fresh mitigation instance.

    Raises:
        ConfigError:
            If the variant is unknown.

    """
    try:
        variant = TrrVariantEnum(variant)
    except ValueError as e:
        raise ConfigError("trr_variant", f"unknown variant {variant!r}") from e
    return _MITIGATIONS[variant](config, channel, rank)


__all__ = [
    "CompanionMitigation",
    "CounterMitigation",
    "Mitigation",
    "NoMitigation",
    "ProbabilisticMitigation",
    "TrrStats",
    "VictimKey",
    "available_variants",
    "create_mitigation",
    "evict_min",
]
