from __future__ import annotations as __future_annotations__

import dataclasses
import logging
from pathlib import Path
from typing import TYPE_CHECKING

import numpy as np

from ..devicemap import DeviceMap
from ..model import TrrVariantEnum
from ..simulator import Engine
from ..simulator.__types__ import (
    PATTERN_CLASSES,
    CommandKindEnum,
    PatternClassEnum,
    PatternProbabilities,
)
from .__types__ import RowKey, SweepResult, WindowStats

if TYPE_CHECKING:
    from collections.abc import Iterable, Mapping

    from ..model import SimConfig
    from ..simulator.__types__ import BankHammerState, Command

logger = logging.getLogger(__name__)


def windowize(
    commands: Iterable[Command],
    config: SimConfig,
    trr_replay: bool = False,
) -> list[WindowStats]:
    """
    Split a command stream into refresh windows and collect
    the activation footprint of each.

    Exposure is tracked by the online engine with fault sampling disabled,
    so gating and classification are the ones the simulation applies.

    Args:
        commands:
            Command stream, ticks non-decreasing.
        config:
            Configuration supplying geometry, timing and threshold.
        trr_replay:
            Replay the configured TRR variant, victim refreshes then reset exposure.
            When False, the stream is replayed without mitigation.

    Returns:
        The windows holding at least one ACT, in window order.

    Raises:
        TraceError:
            If ticks decrease.
        AddressError:
            If a command addresses outside the geometry.

    """
    overrides: dict = {
        "rh_stat_file": None,
        "trr_stats_dump": None,
        "enable_ecc": False,
        "enable_memory_corruption": False,
    }
    if not trr_replay:
        overrides["trr_variant"] = TrrVariantEnum.NONE
    replay = dataclasses.replace(config, **overrides)
    t_refw = replay.resolved_timing.t_refw

    windows: dict[int, WindowStats] = {}
    current: WindowStats | None = None

    def observe(state: BankHammerState, victim: int, pattern: PatternClassEnum, _: bool):
        key = (state.channel, state.rank, state.bank, victim)
        current.record_evaluation(key, pattern, state.exposure[victim])

    engine = Engine(
        replay,
        DeviceMap(replay.geometry),
        observer=observe,
        sample_faults=False,
    )
    for command in commands:
        if command.kind == CommandKindEnum.ACT:
            window = command.tick // t_refw
            current = windows.get(window)
            if current is None:
                current = windows[window] = WindowStats(window=window)
            a = command.address
            current.record_act((a.channel, a.rank, a.bank, a.row))
        engine.step(command)

    result = [windows[w] for w in sorted(windows)]
    logger.debug(
        "Windowized %d ACT(s) into %d window(s)",
        sum(w.activations for w in result),
        len(result),
    )
    return result


def count_threshold_crossings(windows: Iterable[WindowStats], threshold: float) -> int:
    """
    Count the (window, victim) pairs whose exposure reached the threshold.
    """
    return sum(w.crossings(threshold) for w in windows)


def default_probability_grid() -> list[float]:
    """
    Return 1e-9 to 1e-1 by decades, then 0.2 to 1.0 by 0.1.
    """
    grid = [10.0**e for e in range(-9, 0)]
    grid.extend(round(0.1 * k, 1) for k in range(2, 11))
    return grid


def _weak_cells(
    key: RowKey,
    device_map: DeviceMap | None,
    uniform_weak_cells: int,
) -> int:
    if device_map is None:
        return uniform_weak_cells
    _, rank, bank, row = key
    return len(device_map.weak_columns(rank, bank, row))


def _hazards(
    windows: Iterable[WindowStats],
    device_map: DeviceMap | None,
    rowhammer_threshold: int,
    uniform_weak_cells: int,
) -> tuple[np.ndarray, np.ndarray]:
    # Per victim row: weak cells, and qualifying evaluations by pattern over all windows.
    totals: dict[RowKey, list[int]] = {}
    for w in windows:
        for key in w.runs:
            counts = w.qualifying(key, rowhammer_threshold)
            total = totals.setdefault(key, [0] * len(PATTERN_CLASSES))
            for i, pattern in enumerate(PATTERN_CLASSES):
                total[i] += counts[pattern]

    keys = [k for k in sorted(totals) if any(totals[k])]
    cells = np.array(
        [_weak_cells(k, device_map, uniform_weak_cells) for k in keys],
        dtype=np.float64,
    )
    qualifying = np.array([totals[k] for k in keys], dtype=np.float64).reshape(
        len(keys),
        len(PATTERN_CLASSES),
    )
    return cells, qualifying


def _flip_probabilities(qualifying: np.ndarray, probs: PatternProbabilities) -> np.ndarray:
    # 1 - prod_class (1 - p_class)^q_class per cell, in log space.
    p = np.array([probs.for_pattern(c) for c in PATTERN_CLASSES], dtype=np.float64)
    p = np.clip(p, 0.0, 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        logs = np.where(qualifying > 0, qualifying * np.log1p(-p), 0.0)
    return -np.expm1(logs.sum(axis=1))


def expected_bitflips(
    windows: Iterable[WindowStats],
    probs: PatternProbabilities,
    device_map: DeviceMap | None = None,
    rowhammer_threshold: int = 45_000,
    uniform_weak_cells: int = 1,
) -> tuple[float, float]:
    """
    Return the expected number of flipped cells and its variance,
    cells flipping independently of each other.
    """
    cells, qualifying = _hazards(windows, device_map, rowhammer_threshold, uniform_weak_cells)
    pi = _flip_probabilities(qualifying, probs)
    return float(np.dot(cells, pi)), float(np.dot(cells, pi * (1.0 - pi)))


def estimate_bitflips(
    windows: list[WindowStats],
    p_grid: Iterable[float] | None = None,
    device_map: DeviceMap | None = None,
    rowhammer_threshold: int = 45_000,
    uniform_weak_cells: int = 1,
    multipliers: Mapping[PatternClassEnum, float] | None = None,
) -> SweepResult:
    """
    Sweep the expected bitflips of recorded windows over a probability grid.

    Args:
        windows:
            Windows from `windowize`.
        p_grid:
            Probabilities to sweep, `default_probability_grid()` when None.
        device_map:
            Restrict to the map's weak cells, every row carrying
            `uniform_weak_cells` weak cells when None.
        rowhammer_threshold:
            Exposure an evaluation must reach to qualify.
        uniform_weak_cells:
            Weak cells per row without a map.
        multipliers:
            Factor applied to the grid probability per pattern, 1 when absent.

    Returns:
        The expected bitflips per grid point and the threshold crossings.

    """
    grid = list(default_probability_grid() if p_grid is None else p_grid)
    multipliers = multipliers or {}
    cells, qualifying = _hazards(windows, device_map, rowhammer_threshold, uniform_weak_cells)

    expected: list[float] = []
    for p in grid:
        probs = PatternProbabilities(
            single_sided=p * multipliers.get(PatternClassEnum.SINGLE_SIDED, 1.0),
            double_sided=p * multipliers.get(PatternClassEnum.DOUBLE_SIDED, 1.0),
            half_double=p * multipliers.get(PatternClassEnum.HALF_DOUBLE, 1.0),
        )
        expected.append(float(np.dot(cells, _flip_probabilities(qualifying, probs))))

    return SweepResult(
        grid=grid,
        expected=expected,
        crossings=count_threshold_crossings(windows, rowhammer_threshold),
        threshold=rowhammer_threshold,
        mode="uniform" if device_map is None else "map",
    )


def _write_text(lines: list[str], path: str | Path | None) -> str:
    text = "\n".join(lines) + "\n"
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


def write_sweep_csv(result: SweepResult, path: str | Path | None = None) -> str:
    """
    Render `p,expected_flips,crossings`, one line per grid point,
    and write it when a path is given.
    """
    lines = ["p,expected_flips,crossings"]
    lines.extend(f"{p:.10g},{e:.10g},{c}" for p, e, c in result.rows())
    return _write_text(lines, path)


def write_windows_csv(windows: Iterable[WindowStats], path: str | Path | None = None) -> str:
    """
    Render `window,channel,rank,bank,row,acts,exposure,pattern`, one line per row
    that was activated or evaluated as a victim, and write it when a path is given.
    The pattern is empty for rows never evaluated.
    """
    lines = ["window,channel,rank,bank,row,acts,exposure,pattern"]
    for w in windows:
        for key in sorted(w.acts.keys() | w.exposure.keys()):
            pattern = w.patterns.get(key)
            lines.append(
                ",".join(
                    [
                        str(w.window),
                        *(str(v) for v in key),
                        str(w.acts.get(key, 0)),
                        str(w.exposure.get(key, 0)),
                        str(pattern) if pattern is not None else "",
                    ],
                ),
            )
    return _write_text(lines, path)
