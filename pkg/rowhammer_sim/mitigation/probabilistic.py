from __future__ import annotations as __future_annotations__

import logging
from typing import TYPE_CHECKING

from ..model import TrrVariantEnum
from .__types__ import Mitigation

if TYPE_CHECKING:
    from ..model import SimConfig
    from ..simulator.rng import CounterRng

logger = logging.getLogger(__name__)


class NoMitigation(Mitigation):
    """
    Mitigation that never refreshes anything.
    """

    variant = TrrVariantEnum.NONE

    def sample(self, bank: int, row: int, rng: CounterRng, window: int):
        pass


class ProbabilisticMitigation(Mitigation):
    """
    Refresh both neighbours of an activated row with a fixed probability,
    the reciprocal of `trr_threshold`.
    """

    variant = TrrVariantEnum.PROBABILISTIC

    probability: float

    def __init__(self, config: SimConfig, channel: int = 0, rank: int = 0):
        super().__init__(config, channel, rank)
        self.probability = 1.0 / config.trr_threshold

    def sample(self, bank: int, row: int, rng: CounterRng, window: int):
        ordinal = self.stats.samples
        self.stats.samples += 1
        if rng.random(window, self.channel, self.rank, ordinal) < self.probability:
            logger.debug("Sampled aggressor bank %d row %d", bank, row)
            self._enqueue_neighbours(bank, row)
