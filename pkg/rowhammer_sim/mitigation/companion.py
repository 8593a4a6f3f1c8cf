from __future__ import annotations as __future_annotations__

import logging
from typing import TYPE_CHECKING

from ..model import TrrVariantEnum
from .counter import CounterMitigation, evict_min

if TYPE_CHECKING:
    from ..model import SimConfig

logger = logging.getLogger(__name__)


class CompanionMitigation(CounterMitigation):
    """
    Counter table backed by a companion table per bank.

    Rows evicted from the counter table move to the companion table with their count,
    where further activations keep counting against `companion_threshold`.
    Rows evicted from the companion table are forgotten.
    """

    variant = TrrVariantEnum.COMPANION

    companion_length: int
    companion_threshold: int

    def __init__(self, config: SimConfig, channel: int = 0, rank: int = 0):
        super().__init__(config, channel, rank)
        self.companion_length = config.companion_table_length
        self.companion_threshold = max(1, config.companion_threshold)
        self.companions: dict[int, dict[int, int]] = {}

    def companion(self, bank: int) -> dict[int, int]:
        """
        Return the row-to-count companion table of a bank.
        """
        return self.companions.setdefault(bank, {})

    def _bump(self, bank: int, row: int, count: int):
        table = self.companion(bank)
        if count >= self.companion_threshold:
            table[row] = 0
            logger.debug("Companion of bank %d row %d reached %d", bank, row, count)
            self._enqueue_neighbours(bank, row)
        else:
            table[row] = count

    def _evicted(self, bank: int, row: int, count: int):
        table = self.companion(bank)
        if len(table) >= self.companion_length:
            evict_min(table)
        self._bump(bank, row, count)

    def _admit(self, bank: int, row: int) -> bool:
        # Rows held by the companion keep counting there.
        table = self.companion(bank)
        if row in table:
            self._bump(bank, row, table[row] + 1)
            return False
        return super()._admit(bank, row)

    def occupancy(self) -> int:
        return super().occupancy() + sum(len(t) for t in self.companions.values())

    def clear(self):
        super().clear()
        self.companions.clear()
