from __future__ import annotations as __future_annotations__

import logging

from ..model import ConfigError
from .__types__ import (
    CHECK_BITS,
    CODE_BITS,
    WORD_BITS,
    WORD_BYTES,
    EccCodec,
    EccOutcome,
    EccOutcomeKindEnum,
    EccStats,
)
from .secded import (
    ExhaustiveReport,
    ParityMatrix,
    SecdedCodec,
    corrupt,
    default_parity_matrix,
    exhaustive_check,
    load_pmatrix,
    parse_pmatrix,
    save_pmatrix,
)

logger = logging.getLogger(__package__)

_CODECS: dict[str, type[SecdedCodec]] = {
    SecdedCodec.name: SecdedCodec,
}
"""
Mapping from algorithm identifier to codec class.
"""


def available_algorithms() -> list[str]:
    """
    Return the identifiers of all shipped codecs.
    """
    return list(_CODECS.keys())


def create_codec(algorithm: str, pm: ParityMatrix | None = None) -> EccCodec:
    """
    Create the codec named by `ecc_algorithm`.

    Raises:
        ConfigError:
            If the algorithm is unknown.

    """
    codec_cls = _CODECS.get(algorithm)
    if codec_cls is None:
        msg = f"unknown algorithm {algorithm!r}, expected one of {available_algorithms()}"
        raise ConfigError("ecc_algorithm", msg)
    return codec_cls(pm)


__all__ = [
    "CHECK_BITS",
    "CODE_BITS",
    "WORD_BITS",
    "WORD_BYTES",
    "EccCodec",
    "EccOutcome",
    "EccOutcomeKindEnum",
    "EccStats",
    "ExhaustiveReport",
    "ParityMatrix",
    "SecdedCodec",
    "available_algorithms",
    "corrupt",
    "create_codec",
    "default_parity_matrix",
    "exhaustive_check",
    "load_pmatrix",
    "parse_pmatrix",
    "save_pmatrix",
]
