from __future__ import annotations as __future_annotations__

import logging
from typing import TYPE_CHECKING

import numpy as np

from ..ecc import WORD_BYTES
from ..simulator.__types__ import Command
from ..simulator.rng import CounterRng
from .__types__ import TrafficPatternEnum, TrafficSpec

if TYPE_CHECKING:
    from collections.abc import Iterator

    from ..model import DeviceGeometry

logger = logging.getLogger(__name__)

_CHUNK = 4096
"""
Random rows drawn per batch for uniform_random traffic.
"""


def _random_rows(spec: TrafficSpec, rows_per_bank: int) -> Iterator[int]:
    candidates = np.asarray(spec.rows or range(rows_per_bank), dtype=np.int64)
    rng = CounterRng(spec.seed, "traffic.uniform")
    total = spec.total_acts
    for start in range(0, total, _CHUNK):
        lanes = np.arange(start, min(start + _CHUNK, total))
        picks = np.floor(rng.uniforms((spec.bank,), lanes) * len(candidates)).astype(np.int64)
        yield from candidates[picks].tolist()


def _attack_rows(spec: TrafficSpec, rows_per_bank: int) -> Iterator[int]:
    if spec.pattern == TrafficPatternEnum.UNIFORM_RANDOM:
        yield from _random_rows(spec, rows_per_bank)
        return
    aggressors = spec.aggressors()
    n = len(aggressors)
    for i in range(spec.total_acts):
        yield aggressors[i % n]


def generate(spec: TrafficSpec, geometry: DeviceGeometry) -> Iterator[Command]:
    """
    Generate the command stream of a synthetic attack.

    The i-th command, counting from 1, is issued at `start_tick + i * interval`.
    double_sided alternates between the victim's lower and upper neighbour,
    n_sided cycles through its aggressors in the listed order.
    With `victim_reads`, every word of every victim row is read after the attack.

    Args:
        spec:
            Traffic to generate.
        geometry:
            Geometry of the target device.

    Returns:
        A lazy stream of commands, a pure function of the inputs.

    Raises:
        ConfigError:
            If the spec is invalid for the geometry.

    """
    spec.validate(geometry)
    logger.debug(
        "Generating %d %s ACT(s) on bank %d",
        spec.total_acts,
        spec.pattern,
        spec.bank,
    )
    return _generate(spec, geometry)


def _generate(spec: TrafficSpec, geometry: DeviceGeometry) -> Iterator[Command]:
    tick = spec.start_tick
    for row in _attack_rows(spec, geometry.rows_per_bank):
        tick += spec.interval
        yield Command.act(tick, spec.rank, spec.bank, row, spec.channel)

    if not spec.victim_reads or not spec.total_acts:
        return
    words = max(1, geometry.bytes_per_row // WORD_BYTES)
    for victim in spec.victims(geometry.rows_per_bank):
        for word in range(words):
            tick += spec.interval
            column = word * WORD_BYTES // geometry.column_bytes
            yield Command.read(tick, spec.rank, spec.bank, victim, column, spec.channel)
