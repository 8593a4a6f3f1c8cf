from __future__ import annotations as __future_annotations__

import math
from dataclasses import dataclass, field

from dataclasses_json import dataclass_json

from ..model import InvariantError
from ..simulator.__types__ import PATTERN_CLASSES, PatternClassEnum, stronger_pattern

RowKey = tuple[int, int, int, int]
"""
(channel, rank, bank, row).
"""


@dataclass
class WindowStats:
    """
    Activation footprint of one refresh window.
    """

    window: int
    activations: int = 0
    """
    ACT commands in the window.
    """
    acts: dict[RowKey, int] = field(default_factory=dict)
    """
    ACT count per row.
    """
    exposure: dict[RowKey, int] = field(default_factory=dict)
    """
    Peak exposure per victim.
    """
    patterns: dict[RowKey, PatternClassEnum] = field(default_factory=dict)
    """
    Strongest pattern per victim.
    """
    runs: dict[RowKey, list[list[list]]] = field(default_factory=dict)
    """
    Pattern of every evaluation per victim, run-length encoded as [pattern, count] pairs,
    one segment per exposure build-up (a TRR refresh starts a new one).
    """

    def record_act(self, key: RowKey):
        self.activations += 1
        self.acts[key] = self.acts.get(key, 0) + 1

    def record_evaluation(self, key: RowKey, pattern: PatternClassEnum, exposure: int):
        """
        Record one neighbour evaluation, `exposure` being the victim's exposure after it.
        """
        segments = self.runs.setdefault(key, [])
        if exposure == 1 or not segments:
            segments.append([])
        segment = segments[-1]
        if segment and segment[-1][0] == pattern:
            segment[-1][1] += 1
        else:
            segment.append([pattern, 1])
        if exposure > self.exposure.get(key, 0):
            self.exposure[key] = exposure
        self.patterns[key] = stronger_pattern(self.patterns.get(key), pattern)

    def victims(self) -> list[RowKey]:
        return sorted(self.runs.keys())

    def qualifying(self, key: RowKey, threshold: int) -> dict[PatternClassEnum, int]:
        """
        Count the evaluations of a victim that pass the threshold, by pattern.
        An evaluation qualifies when the exposure it brings the victim to reaches the threshold.
        """
        counts = dict.fromkeys(PATTERN_CLASSES, 0)
        first = max(threshold, 1)
        for segment in self.runs.get(key, ()):
            position = 0
            for pattern, count in segment:
                counts[pattern] += max(0, position + count - max(position, first - 1))
                position += count
        return counts

    def crossings(self, threshold: float) -> int:
        """
        Count the victims whose exposure reached the threshold.
        """
        return sum(1 for e in self.exposure.values() if e >= threshold)

    def check(self):
        """
        Raises:
            InvariantError:
                If the per-row ACT counts do not add up to the window's ACTs.

        """
        total = sum(self.acts.values())
        if total != self.activations:
            msg = f"window {self.window}: {total} counted ACT(s) for {self.activations} command(s)"
            raise InvariantError(msg)


@dataclass_json
@dataclass
class SweepResult:
    """
    Expected bitflips over a probability grid.
    """

    grid: list[float] = field(default_factory=list)
    """
    Swept single-sided probabilities.
    """
    expected: list[float] = field(default_factory=list)
    """
    Expected bitflips per grid point.
    """
    crossings: int = 0
    """
    Victims whose exposure reached the threshold, over all windows.
    """
    threshold: int = 0
    mode: str = "uniform"
    """
    `map` when restricted to a device map, `uniform` otherwise.
    """

    def rows(self) -> list[tuple[float, float, int]]:
        return [(p, e, self.crossings) for p, e in zip(self.grid, self.expected, strict=True)]


@dataclass_json
@dataclass
class ConsistencyReport:
    """
    Online Monte-Carlo bitflips against the offline expectation.
    """

    seeds: int = 0
    online: list[int] = field(default_factory=list)
    """
    Bitflips of every seeded online run.
    """
    online_mean: float = 0.0
    online_std: float = 0.0
    offline_expected: float = 0.0
    sigma: float = 0.0
    """
    Standard deviation of the online mean under the offline model.
    """
    tolerance: float = 3.0
    """
    Accepted deviation, in sigmas.
    """

    @property
    def z(self) -> float:
        diff = self.online_mean - self.offline_expected
        if self.sigma == 0:
            return 0.0 if math.isclose(diff, 0.0, abs_tol=1e-9) else math.inf
        return diff / self.sigma

    @property
    def within_tolerance(self) -> bool:
        return abs(self.z) <= self.tolerance

    def check(self):
        """
        Raises:
            InvariantError:
                If the online mean deviates beyond the tolerance.

        """
        if not self.within_tolerance:
            msg = (
                f"online mean {self.online_mean:.6g} deviates from the offline "
                f"expectation {self.offline_expected:.6g} by {self.z:.3g} sigma"
            )
            raise InvariantError(msg)
