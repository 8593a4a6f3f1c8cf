from __future__ import annotations as __future_annotations__

import logging
from typing import TYPE_CHECKING

from ..model import TrrVariantEnum
from .__types__ import Mitigation

if TYPE_CHECKING:
    from ..model import SimConfig
    from ..simulator.rng import CounterRng

logger = logging.getLogger(__name__)


def evict_min(table: dict[int, int]) -> tuple[int, int]:
    """
    Remove the entry with the lowest count, the lowest row on ties.

    Returns:
        The evicted (row, count).

    """
    row = min(table, key=lambda r: (table[r], r))
    return row, table.pop(row)


class CounterMitigation(Mitigation):
    """
    Count activations per bank in a bounded table,
    refreshing the neighbours of a row when its count reaches `trr_threshold`.
    """

    variant = TrrVariantEnum.COUNTER

    table_length: int
    """
    Capacity of the table of every bank.
    """

    def __init__(self, config: SimConfig, channel: int = 0, rank: int = 0):
        super().__init__(config, channel, rank)
        self.table_length = config.counter_table_length
        self.tables: dict[int, dict[int, int]] = {}

    def table(self, bank: int) -> dict[int, int]:
        """
        Return the row-to-count table of a bank.
        """
        return self.tables.setdefault(bank, {})

    def _evicted(self, bank: int, row: int, count: int):
        logger.debug("Evicted bank %d row %d at count %d", bank, row, count)

    def _admit(self, bank: int, row: int) -> bool:
        """
        Insert an untracked row into the table at count 0, evicting the minimum when full.
        Returns whether the activation is to be counted in the table.
        """
        table = self.table(bank)
        if len(table) >= self.table_length:
            self._evicted(bank, *evict_min(table))
        table[row] = 0
        return True

    def sample(self, bank: int, row: int, rng: CounterRng, window: int):
        self.stats.samples += 1
        table = self.table(bank)
        if row not in table and not self._admit(bank, row):
            return
        table[row] += 1
        if table[row] >= self.trr_threshold:
            table[row] = 0
            logger.debug("Counter of bank %d row %d reached %d", bank, row, self.trr_threshold)
            self._enqueue_neighbours(bank, row)

    def occupancy(self) -> int:
        return sum(len(t) for t in self.tables.values())

    def clear(self):
        super().clear()
        self.tables.clear()
