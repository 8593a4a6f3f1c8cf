from __future__ import annotations as __future_annotations__

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import TYPE_CHECKING

from dataclasses_json import dataclass_json

from ..model import TrrVariantEnum

if TYPE_CHECKING:
    from collections.abc import Callable

    from ..model import SimConfig
    from ..simulator.rng import CounterRng

VictimKey = tuple[int, int]
"""
(bank, row) of a victim awaiting refresh.
"""


@dataclass_json
@dataclass
class TrrStats:
    """
    Mitigation counters of one refresh window.
    """

    samples: int = 0
    """
    ACTs seen by the sampler.
    """
    triggers: int = 0
    """
    Sampler decisions to refresh the neighbours of an aggressor.
    """
    queued: int = 0
    """
    Victims newly added to the pending queue.
    """
    refreshed: int = 0
    """
    Victims refreshed by the inhibitor.
    """
    occupancy: int = 0
    """
    Table entries at the end of the window.
    """

    def dump_line(self, window: int) -> str:
        """
        Render the stats as `<window> <samples> <queued> <refreshed> <table_occupancy>`.
        """
        return f"{window} {self.samples} {self.queued} {self.refreshed} {self.occupancy}"


class Mitigation(ABC):
    """
    Base class for TRR mitigations of one rank.

    The sampler observes every ACT and queues suspected victims,
    the inhibitor refreshes them only while the rank is refreshing.
    """

    variant: TrrVariantEnum = TrrVariantEnum.NONE
    """
    Variant of the mitigation.
    """

    def __init__(self, config: SimConfig, channel: int = 0, rank: int = 0):
        self.channel = channel
        self.rank = rank
        self.rows_per_bank = config.geometry.rows_per_bank
        self.trr_threshold = config.trr_threshold
        self.stats = TrrStats()
        self._pending: dict[VictimKey, None] = {}

    @property
    def name(self) -> str:
        return str(self.variant)

    @property
    def pending(self) -> list[VictimKey]:
        """
        Victims awaiting refresh, in queue order.
        """
        return list(self._pending)

    def enqueue(self, bank: int, victim: int) -> bool:
        """
        Queue a victim for refresh, coalescing with a pending duplicate.

        Returns:
            Whether the victim was newly queued.

        """
        if not 0 <= victim < self.rows_per_bank:
            return False
        key = (bank, victim)
        if key in self._pending:
            return False
        self._pending[key] = None
        self.stats.queued += 1
        return True

    def _enqueue_neighbours(self, bank: int, aggressor: int):
        self.stats.triggers += 1
        self.enqueue(bank, aggressor - 1)
        self.enqueue(bank, aggressor + 1)

    @abstractmethod
    def sample(self, bank: int, row: int, rng: CounterRng, window: int):
        """
        Observe one ACT.

        Args:
            bank:
                Bank of the activated row.
            row:
                The activated row.
            rng:
                Generator for probabilistic decisions.
            window:
                Index of the current refresh window.

        """
        raise NotImplementedError

    def inhibit(
        self,
        budget: int,
        on_refresh: Callable[[int, int], None] | None = None,
    ) -> list[VictimKey]:
        """
        Refresh up to `budget` pending victims in queue order,
        neutralizing their accumulated exposure.

        Args:
            budget:
                Maximum victims to refresh.
            on_refresh:
                Called with (bank, row) of every refreshed victim.

        Returns:
            The refreshed (bank, row) victims.

        """
        refreshed: list[VictimKey] = []
        while self._pending and len(refreshed) < budget:
            key = next(iter(self._pending))
            del self._pending[key]
            if on_refresh is not None:
                on_refresh(*key)
            refreshed.append(key)
        self.stats.refreshed += len(refreshed)
        return refreshed

    def occupancy(self) -> int:
        """
        Return the number of table entries held.
        """
        return 0

    def reset_window_stats(self) -> TrrStats:
        """
        Close the window's counters.

        Returns:
            The counters of the closing window, occupancy filled in.

        """
        stats = self.stats
        stats.occupancy = self.occupancy()
        self.stats = TrrStats()
        return stats

    def clear(self):
        """
        Drop every table entry and pending victim.
        """
        self._pending.clear()
