from __future__ import annotations as __future_annotations__

from typing import TYPE_CHECKING

import numpy as np

from .__types__ import (
    BankHammerState,
    BitflipRecord,
    PatternClassEnum,
    PatternProbabilities,
)

if TYPE_CHECKING:
    from collections.abc import Mapping

    from ..devicemap.__types__ import DeviceMap
    from .rng import CounterRng

BLAST_RADIUS = 2
"""
Farthest victim distance of an aggressor, covering half-double.
"""


def victims_of(aggressor: int, rows_per_bank: int) -> list[int]:
    """
    Return the in-range victims of an aggressor, row-2 to row+2 without itself.
    """
    return [
        aggressor + d
        for d in range(-BLAST_RADIUS, BLAST_RADIUS + 1)
        if d and 0 <= aggressor + d < rows_per_bank
    ]


def classify(acts: Mapping[int, int], aggressor: int, victim: int) -> PatternClassEnum:
    """
    Classify the pattern an aggressor ACT imposes on a victim,
    from the activation counts of the current window.

    Raises:
        ValueError:
            If the rows are not one or two apart.

    """
    distance = abs(aggressor - victim)
    if distance == 2:
        between = (aggressor + victim) // 2
        if acts.get(between, 0) >= 1:
            return PatternClassEnum.HALF_DOUBLE
        return PatternClassEnum.SINGLE_SIDED
    if distance == 1:
        if acts.get(victim - 1, 0) >= 1 and acts.get(victim + 1, 0) >= 1:
            return PatternClassEnum.DOUBLE_SIDED
        return PatternClassEnum.SINGLE_SIDED
    msg = f"rows {aggressor} and {victim} are {distance} apart, expected 1 or 2"
    raise ValueError(msg)


def expose(state: BankHammerState, victim: int, threshold: int) -> bool:
    """
    Count one neighbour evaluation of a victim.

    Returns:
        Whether the victim's exposure has reached the threshold,
        i.e. whether its weak cells may flip on this evaluation.

    """
    exposure = state.exposure.get(victim, 0) + 1
    state.exposure[victim] = exposure
    state.evals[victim] = state.evals.get(victim, 0) + 1
    return exposure >= threshold


def evaluate_faults(
    state: BankHammerState,
    device_map: DeviceMap,
    victim: int,
    pattern: PatternClassEnum,
    probs: PatternProbabilities,
    rowhammer_threshold: int,
    rng: CounterRng,
    tick: int = 0,
) -> list[BitflipRecord]:
    """
    Evaluate one aggressor ACT against one victim:
    count the exposure and, past the threshold, flip every weak cell
    not yet flipped with the pattern's probability, independently.

    Returns:
        The new bitflips, also recorded in `state.flipped`.

    """
    if not expose(state, victim, rowhammer_threshold):
        return []
    p = probs.for_pattern(pattern)
    if p <= 0:
        return []
    weak = device_map.weak_array(state.rank, state.bank, victim)
    if not len(weak):
        return []

    flipped = state.flipped.get(victim)
    if flipped:
        weak = np.asarray([c for c in weak.tolist() if c not in flipped], dtype=np.int64)
        if not len(weak):
            return []

    key = (state.window, state.channel, state.rank, state.bank, victim, state.evals[victim])
    draws = rng.uniforms(key, weak)
    hits = weak[draws < p]
    if not len(hits):
        return []

    if flipped is None:
        flipped = state.flipped[victim] = set()
    records = []
    for column in hits.tolist():
        flipped.add(column)
        records.append(
            BitflipRecord(
                tick=tick,
                channel=state.channel,
                rank=state.rank,
                bank=state.bank,
                row=victim,
                column=column,
                pattern=pattern,
            ),
        )
    return records


def reset_window(state: BankHammerState, window: int | None = None):
    """
    Clear the per-window counters, keeping flipped cells.
    """
    state.acts.clear()
    state.exposure.clear()
    state.evals.clear()
    if window is not None:
        state.window = window


def on_trr_refresh(state: BankHammerState, victim: int):
    """
    Neutralize the accumulated hammer pressure on a refreshed victim,
    its neighbours' activation counts are left alone.
    """
    if victim in state.exposure:
        state.exposure[victim] = 0


def repair(state: BankHammerState, row: int, columns: set[int]):
    """
    Forget flipped cells overwritten by a write, so they may flip again.
    """
    flipped = state.flipped.get(row)
    if not flipped:
        return
    flipped.difference_update(columns)
    if not flipped:
        del state.flipped[row]
