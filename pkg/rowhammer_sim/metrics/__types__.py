from __future__ import annotations as __future_annotations__

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from ..model import DistributionError

NORMALIZATION_TOLERANCE = 1e-9


class DistributionModeEnum(str, Enum):
    """
    Enum for how flips are turned into a distribution.
    """

    FREQUENCY = "frequency"
    """
    Mass proportional to the flips seen at an index.
    """
    BINARY = "binary"
    """
    Equal mass on every index that flipped at least once.
    """

    def __str__(self):
        return self.value


class DistributionAxisEnum(str, Enum):
    """
    Enum for the index a distribution ranges over.
    """

    COLUMN = "column"
    ROW = "row"

    def __str__(self):
        return self.value


@dataclass(frozen=True, eq=False)
class BitflipDistribution:
    """
    Normalized distribution of bitflips over column (or row) indices.
    """

    probabilities: np.ndarray = field(repr=False)
    label: str = ""
    axis: DistributionAxisEnum = DistributionAxisEnum.COLUMN

    def __post_init__(self):
        p = self.probabilities
        if p.ndim != 1:
            msg = f"distribution {self.label!r} must be one-dimensional, got shape {p.shape}"
            raise DistributionError(msg)
        if p.size and (p < 0).any():
            msg = f"distribution {self.label!r} has negative mass"
            raise DistributionError(msg)
        total = float(p.sum())
        if total and abs(total - 1.0) > NORMALIZATION_TOLERANCE:
            msg = f"distribution {self.label!r} sums to {total}, expected 1"
            raise DistributionError(msg)

    @property
    def size(self) -> int:
        """
        Dimension of the support.
        """
        return int(self.probabilities.size)

    @property
    def empty(self) -> bool:
        return not self.probabilities.any()

    def support(self) -> list[int]:
        """
        Indices carrying mass.
        """
        return np.flatnonzero(self.probabilities).tolist()

    def __repr__(self) -> str:
        return f"BitflipDistribution(label={self.label!r}, size={self.size}, support={len(self.support())})"
