from __future__ import annotations as __future_annotations__

import zlib
from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from collections.abc import Sequence

_MASK = (1 << 64) - 1

_GOLDEN = 0x9E3779B97F4A7C15

_SCALE = 2.0**-53

_VECTOR_MIN_LANES = 16
"""
Below this many lanes the pure-int path is faster than numpy.
"""


def _mix(z: int) -> int:
    # splitmix64 finalizer
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def _mix_array(z: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def _absorb(h: int, k: int) -> int:
    return _mix(h ^ _mix((k + _GOLDEN) & _MASK))


def stream_tag(name: str) -> int:
    """
    Derive a stable stream identifier from a name.
    """
    return zlib.crc32(name.encode("utf-8")) & 0xFFFFFFFF


class CounterRng:
    """
    Counter-based generator: every draw is a pure function of
    (seed, stream, key), so results do not depend on evaluation order.

    Keys are tuples of integers, e.g. (window, channel, rank, bank, row, ordinal),
    with an optional vector of lanes (e.g. columns) drawn at once.
    """

    seed: int
    stream: str

    def __init__(self, seed: int, stream: str):
        self.seed = seed
        self.stream = stream
        self._base = _absorb(_mix(seed & _MASK), stream_tag(stream))

    def _key_hash(self, key: Sequence[int]) -> int:
        h = self._base
        for k in key:
            h = _absorb(h, k & _MASK)
        return h

    def bits(self, *key: int) -> int:
        """
        Return 64 random bits for a key.
        """
        return self._key_hash(key)

    def random(self, *key: int) -> float:
        """
        Return a uniform float in [0, 1) for a key.
        """
        return (self._key_hash(key) >> 11) * _SCALE

    def open_random(self, *key: int) -> float:
        """
        Return a uniform float in (0, 1) for a key.
        """
        return max(self.random(*key), 0.5 * _SCALE)

    def uniforms(self, key: Sequence[int], lanes: Sequence[int] | np.ndarray) -> np.ndarray:
        """
        Return uniform floats in [0, 1), one per lane, for a key.
        """
        h = self._key_hash(key)
        if len(lanes) < _VECTOR_MIN_LANES:
            return np.array(
                [(_absorb(h, int(lane) & _MASK) >> 11) * _SCALE for lane in lanes],
                dtype=np.float64,
            )

        lanes = np.asarray(lanes, dtype=np.int64).astype(np.uint64)
        with np.errstate(over="ignore"):
            z = _mix_array(lanes + np.uint64(_GOLDEN))
        z = _mix_array(np.uint64(h) ^ z)
        return (z >> np.uint64(11)).astype(np.float64) * _SCALE

    def open_uniforms(self, key: Sequence[int], lanes: Sequence[int] | np.ndarray) -> np.ndarray:
        """
        Return uniform floats in (0, 1), one per lane, for a key.
        """
        return np.maximum(self.uniforms(key, lanes), 0.5 * _SCALE)
