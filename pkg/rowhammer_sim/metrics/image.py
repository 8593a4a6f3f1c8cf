from __future__ import annotations as __future_annotations__

import math
from pathlib import Path
from typing import TYPE_CHECKING

import numpy as np

from .__types__ import BitflipDistribution

if TYPE_CHECKING:
    from collections.abc import Iterable

WHITE = 255
BLACK = 0


def grid_side(columns_per_row: int) -> int:
    """
    Side of the square grid holding a row, padded up to the next square.
    """
    return math.isqrt(columns_per_row - 1) + 1 if columns_per_row > 1 else 1


def render_bitflip_grid(
    flips: BitflipDistribution | Iterable[int],
    columns_per_row: int,
) -> np.ndarray:
    """
    Render the flipped columns of a row as a square grayscale grid,
    column c at (c // side, c % side), white where flipped.

    Args:
        flips:
            Flipped columns, or a distribution whose support is taken.
        columns_per_row:
            Columns of the row, the grid side is the ceiling of its square root.

    Returns:
        A `side x side` uint8 array.

    """
    side = grid_side(columns_per_row)
    columns = flips.support() if isinstance(flips, BitflipDistribution) else flips
    grid = np.full((side, side), BLACK, dtype=np.uint8)
    for column in columns:
        if 0 <= column < columns_per_row:
            grid[column // side, column % side] = WHITE
    return grid


def superimpose(*grids: np.ndarray) -> np.ndarray:
    """
    OR several grids together, the white set being the union of the inputs.
    """
    return np.maximum.reduce(grids)


def grid_columns(grid: np.ndarray) -> list[int]:
    """
    Return the white columns of a grid, inverse of `render_bitflip_grid`.
    """
    side = grid.shape[1]
    return [int(r) * side + int(c) for r, c in zip(*np.nonzero(grid == WHITE), strict=True)]


def encode_pgm(grid: np.ndarray, binary: bool = True) -> bytes:
    """
    Encode a grid as a portable graymap, P5 when binary else P2.
    """
    height, width = grid.shape
    if binary:
        header = f"P5\n{width} {height}\n{WHITE}\n".encode("ascii")
        return header + grid.astype(np.uint8).tobytes()
    lines = [f"P2\n{width} {height}\n{WHITE}"]
    lines.extend(" ".join(str(v) for v in row) for row in grid.tolist())
    return ("\n".join(lines) + "\n").encode("ascii")


def write_pgm(grid: np.ndarray, path: str | Path, binary: bool = True):
    Path(path).write_bytes(encode_pgm(grid, binary))
