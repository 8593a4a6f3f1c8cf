from __future__ import annotations as __future_annotations__

import logging
from pathlib import Path
from typing import TYPE_CHECKING

import numpy as np

from ..model import DistributionError, TraceError
from ..model.__utils__ import iter_text_lines
from ..simulator.__types__ import BitflipRecord, PatternClassEnum
from .__types__ import BitflipDistribution, DistributionAxisEnum, DistributionModeEnum

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence

    from ..devicemap import DeviceMap

logger = logging.getLogger(__name__)

DEFAULT_EPSILON = 1e-12
"""
Add-epsilon smoothing mass, applied only when asked for.
"""


def _index_of(value: BitflipRecord | int, axis: DistributionAxisEnum) -> int:
    if isinstance(value, BitflipRecord):
        return value.row if axis == DistributionAxisEnum.ROW else value.column
    return int(value)


def build_distribution(
    values: Iterable[BitflipRecord | int],
    size: int,
    mode: DistributionModeEnum | str = DistributionModeEnum.FREQUENCY,
    label: str = "",
    axis: DistributionAxisEnum | str = DistributionAxisEnum.COLUMN,
    epsilon: float = 0.0,
    allow_empty: bool = False,
) -> BitflipDistribution:
    """
    Build a normalized distribution from flips.

    Args:
        values:
            Flip records, or bare indices.
        size:
            Dimension of the support, columns per row or rows per bank.
        mode:
            `frequency` weighs an index by its flips, `binary` by whether it flipped.
        label:
            Source label.
        axis:
            Index records are read along.
        epsilon:
            Mass added to every index before normalizing, 0 to disable.
        allow_empty:
            Return an all-zero distribution when there is no flip.

    Raises:
        DistributionError:
            If an index is out of range, or nothing flipped and empty is not allowed.

    """
    mode = DistributionModeEnum(mode)
    axis = DistributionAxisEnum(axis)
    counts = np.zeros(size, dtype=np.float64)
    for value in values:
        index = _index_of(value, axis)
        if not 0 <= index < size:
            msg = f"{axis} {index} out of range [0, {size}) in {label!r}"
            raise DistributionError(msg)
        counts[index] += 1

    if mode == DistributionModeEnum.BINARY:
        counts = (counts > 0).astype(np.float64)
    if not counts.any():
        if not allow_empty:
            msg = f"no bitflips to build a distribution from in {label!r}"
            raise DistributionError(msg)
        return BitflipDistribution(counts, label, axis)
    if epsilon > 0:
        counts += epsilon
    return BitflipDistribution(counts / counts.sum(), label, axis)


def map_distribution(
    device_map: DeviceMap,
    rank: int | None = None,
    bank: int | None = None,
    row: int | None = None,
    label: str = "",
    mode: DistributionModeEnum | str = DistributionModeEnum.FREQUENCY,
    axis: DistributionAxisEnum | str = DistributionAxisEnum.COLUMN,
    allow_empty: bool = False,
) -> BitflipDistribution:
    """
    Build the uniform-over-weak-cells distribution of a map,
    restricted to the given rank, bank and row when set.
    """
    axis = DistributionAxisEnum(axis)
    geometry = device_map.geometry
    values = [
        w if axis == DistributionAxisEnum.ROW else c
        for r, b, w, c in device_map.cells()
        if (rank is None or r == rank) and (bank is None or b == bank) and (row is None or w == row)
    ]
    size = geometry.rows_per_bank if axis == DistributionAxisEnum.ROW else geometry.columns_per_row
    return build_distribution(
        values,
        size,
        mode=mode,
        label=label,
        axis=axis,
        allow_empty=allow_empty,
    )


def _kl(p: np.ndarray, m: np.ndarray) -> float:
    # 0 * log 0 = 0, and m > 0 wherever p > 0.
    mask = p > 0
    return float(np.sum(p[mask] * np.log2(p[mask] / m[mask])))


def js_divergence(p: BitflipDistribution, q: BitflipDistribution) -> float:
    """
    Jensen-Shannon divergence in base 2, within [0, 1].

    Raises:
        DistributionError:
            If the dimensions differ or either distribution is empty.

    """
    if p.size != q.size:
        msg = f"cannot compare {p.label!r} and {q.label!r}: dimension {p.size} against {q.size}"
        raise DistributionError(msg)
    if p.empty or q.empty:
        label = p.label if p.empty else q.label
        msg = f"distribution {label!r} is empty"
        raise DistributionError(msg)
    m = 0.5 * (p.probabilities + q.probabilities)
    value = 0.5 * _kl(p.probabilities, m) + 0.5 * _kl(q.probabilities, m)
    return min(1.0, max(0.0, value))


def jsd_matrix(
    references: Sequence[BitflipDistribution],
    tests: Sequence[BitflipDistribution],
) -> np.ndarray:
    """
    Return the divergences of every test against every reference,
    one row per reference.
    """
    matrix = np.zeros((len(references), len(tests)), dtype=np.float64)
    for i, ref in enumerate(references):
        for j, test in enumerate(tests):
            matrix[i, j] = js_divergence(ref, test)
    return matrix


def write_jsd_csv(
    matrix: np.ndarray,
    references: Sequence[str],
    tests: Sequence[str],
    path: str | Path | None = None,
) -> str:
    """
    Render a divergence matrix as CSV, references down, tests across,
    and write it when a path is given.
    """
    lines = [",".join(["jsd_base2", *tests])]
    for label, row in zip(references, matrix, strict=True):
        lines.append(",".join([label, *(f"{v:.6f}" for v in row)]))
    text = "\n".join(lines) + "\n"
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


def parse_bitflip_record(text: str, line: int) -> BitflipRecord | None:
    """
    Parse one `<tick> <[channel:]rank> <bank> <row> <column> <pattern>` line,
    None for blank lines.

    Raises:
        TraceError:
            If the line is malformed.

    """
    tokens = text.split()
    if not tokens:
        return None
    if len(tokens) != 6:
        msg = f"expected 6 fields in a bitflip record, got {len(tokens)}"
        raise TraceError(msg, line)
    try:
        tick = int(tokens[0])
        channel, _, rank = tokens[1].rpartition(":")
        bank, row, column = (int(t) for t in tokens[2:5])
        pattern = PatternClassEnum(tokens[5])
        return BitflipRecord(
            tick=tick,
            channel=int(channel) if channel else 0,
            rank=int(rank),
            bank=bank,
            row=row,
            column=column,
            pattern=pattern,
        )
    except ValueError as e:
        msg = f"malformed bitflip record: {e}"
        raise TraceError(msg, line) from None


def read_bitflip_records(path: str | Path) -> list[BitflipRecord]:
    """
    Read the bitflips of a stats file written by `simulate`.

    Raises:
        OSError:
            If the file cannot be read.
        TraceError:
            If a line is malformed.

    """
    records: list[BitflipRecord] = []
    for number, text in enumerate(iter_text_lines(path), start=1):
        record = parse_bitflip_record(text, number)
        if record is not None:
            records.append(record)
    logger.debug("Read %d bitflip(s) from %s", len(records), path)
    return records
