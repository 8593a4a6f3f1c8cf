from __future__ import annotations as __future_annotations__

from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum

from dataclasses_json import dataclass_json

WORD_BYTES = 8
"""
Width of a protected word in bytes.
"""

WORD_BITS = WORD_BYTES * 8

CHECK_BITS = 8

CODE_BITS = WORD_BITS + CHECK_BITS


class EccOutcomeKindEnum(str, Enum):
    """
    Enum for decode outcomes.
    """

    CLEAN = "clean"
    """
    Zero syndrome.
    """
    CORRECTED_SINGLE = "corrected_single"
    """
    Syndrome equals one column, the bit at that position is corrected.
    """
    DETECTED_DOUBLE = "detected_double"
    """
    Syndrome identified as an even number of errors.
    """
    UNCORRECTABLE = "uncorrectable"
    """
    Syndrome matches no column and cannot be classified as a double error.
    """

    def __str__(self):
        return self.value


@dataclass_json
@dataclass(frozen=True)
class EccOutcome:
    """
    Result of decoding one word.
    """

    kind: EccOutcomeKindEnum
    """
    Classification of the syndrome.
    """
    position: int | None = None
    """
    Corrected codeword position, 0-63 for data bits and 64-71 for check bits,
    only set for corrected_single.
    """

    def __str__(self):
        if self.position is None:
            return str(self.kind)
        return f"{self.kind}({self.position})"


@dataclass_json
@dataclass
class EccStats:
    """
    Running decode counters.
    """

    clean: int = 0
    single_errors_corrected: int = 0
    double_errors_detected: int = 0
    uncorrectable_errors: int = 0
    miscorrected: int = 0
    """
    Decodes whose returned word differs from the pre-corruption word,
    a diagnostic outside the outcome counters.
    """

    @property
    def protected_reads(self) -> int:
        return (
            self.clean
            + self.single_errors_corrected
            + self.double_errors_detected
            + self.uncorrectable_errors
        )

    def record(self, outcome: EccOutcome, miscorrected: bool = False):
        """
        Count one decode.
        """
        match outcome.kind:
            case EccOutcomeKindEnum.CLEAN:
                self.clean += 1
            case EccOutcomeKindEnum.CORRECTED_SINGLE:
                self.single_errors_corrected += 1
            case EccOutcomeKindEnum.DETECTED_DOUBLE:
                self.double_errors_detected += 1
            case _:
                self.uncorrectable_errors += 1
        if miscorrected:
            self.miscorrected += 1


class EccCodec(ABC):
    """
    Base class for word-level error correcting codes.
    """

    name: str
    """
    Identifier, as used by the `ecc_algorithm` option.
    """

    @abstractmethod
    def encode(self, word: int) -> int:
        """
        Compute the check bits of a data word.
        """
        raise NotImplementedError

    @abstractmethod
    def decode(self, word: int, check: int) -> tuple[int, EccOutcome]:
        """
        Decode a possibly corrupted data word against its check bits.

        Returns:
            The corrected word and the outcome.

        """
        raise NotImplementedError
