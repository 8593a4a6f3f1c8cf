from __future__ import annotations as __future_annotations__

import itertools
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING

from dataclasses_json import dataclass_json

from ..model import ParityMatrixError
from ..model.__utils__ import read_text
from .__types__ import (
    CHECK_BITS,
    CODE_BITS,
    WORD_BITS,
    EccCodec,
    EccOutcome,
    EccOutcomeKindEnum,
)

if TYPE_CHECKING:
    from collections.abc import Iterable

logger = logging.getLogger(__name__)


class ParityMatrix:
    """
    Parity-check matrix of a (72,64) code, 8 rows by 72 columns,
    stored as one 8-bit syndrome per column.
    Columns 0-63 cover data bits, columns 64-71 the check bits.
    """

    columns: tuple[int, ...]
    """
    Syndrome of every codeword position, bit i is matrix row i.
    """
    row_masks: tuple[int, ...]
    """
    Data bits selected by every matrix row, as 64-bit masks.
    """

    def __init__(self, columns: Iterable[int]):
        self.columns = tuple(columns)
        self.validate()
        self.row_masks = tuple(
            sum(1 << j for j in range(WORD_BITS) if self.columns[j] >> i & 1)
            for i in range(CHECK_BITS)
        )
        self._positions = {col: j for j, col in enumerate(self.columns)}

    def validate(self):
        """
        Check the code invariants.

        Raises:
            ParityMatrixError:
                Naming the offending column.

        """
        if len(self.columns) != CODE_BITS:
            msg = f"expected {CODE_BITS} columns, got {len(self.columns)}"
            raise ParityMatrixError(msg)
        seen: dict[int, int] = {}
        for j, col in enumerate(self.columns):
            if not 0 <= col < 1 << CHECK_BITS:
                msg = f"column {j} is not an {CHECK_BITS}-bit vector"
                raise ParityMatrixError(msg, column=j)
            if col == 0:
                msg = f"column {j} is zero"
                raise ParityMatrixError(msg, column=j)
            if col in seen:
                msg = f"ambiguous syndrome: column {j} equals column {seen[col]}"
                raise ParityMatrixError(msg, column=j)
            seen[col] = j
        for i in range(CHECK_BITS):
            j = WORD_BITS + i
            if self.columns[j] != 1 << i:
                msg = f"column {j} breaks the identity check-bit block"
                raise ParityMatrixError(msg, column=j)

    @property
    def is_odd_weight(self) -> bool:
        """
        Whether every column has odd weight,
        in which case every even-weight syndrome is an even number of errors.
        """
        return all(col.bit_count() & 1 for col in self.columns)

    def position_of(self, syndrome: int) -> int | None:
        """
        Return the codeword position whose column equals the syndrome.
        """
        return self._positions.get(syndrome)

    def dumps(self) -> str:
        """
        Render the matrix in the text format, one row per line.
        """
        lines = [
            "".join(str(col >> i & 1) for col in self.columns)
            for i in range(CHECK_BITS)
        ]
        return "\n".join(lines) + "\n"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ParityMatrix) and self.columns == other.columns

    def __hash__(self) -> int:
        return hash(self.columns)


def parse_pmatrix(text: str) -> ParityMatrix:
    """
    Parse the text format: 8 lines of 72 '0'/'1' characters,
    whitespace inside a line and blank or '#' lines are ignored.

    Raises:
        ParityMatrixError:
            If the shape or content is wrong.

    """
    rows: list[str] = []
    for raw in text.splitlines():
        line = "".join(raw.split())
        if not line or line.startswith("#"):
            continue
        rows.append(line)

    if len(rows) != CHECK_BITS:
        msg = f"expected {CHECK_BITS} rows, got {len(rows)}"
        raise ParityMatrixError(msg)
    for i, row in enumerate(rows):
        if len(row) != CODE_BITS:
            msg = f"row {i} has {len(row)} columns, expected {CODE_BITS}"
            raise ParityMatrixError(msg)
        for j, ch in enumerate(row):
            if ch not in "01":
                msg = f"row {i} holds {ch!r} at column {j}, expected '0' or '1'"
                raise ParityMatrixError(msg, column=j)

    columns = [
        sum(int(rows[i][j]) << i for i in range(CHECK_BITS)) for j in range(CODE_BITS)
    ]
    return ParityMatrix(columns)


def load_pmatrix(path: str | Path) -> ParityMatrix:
    """
    Load a parity-check matrix file.

    Raises:
        OSError:
            If the file cannot be read.
        ParityMatrixError:
            If the matrix is malformed.

    """
    path = Path(path)
    pm = parse_pmatrix(read_text(path, ParityMatrixError))
    logger.debug("Loaded parity-check matrix %s", path)
    return pm


def save_pmatrix(pm: ParityMatrix, path: str | Path):
    """
    Write a parity-check matrix file.
    """
    Path(path).write_text(pm.dumps(), encoding="utf-8")


def default_parity_matrix() -> ParityMatrix:
    """
    Build the shipped Hsiao SECDED(72,64) matrix:
    the 56 weight-3 columns, then the first 8 weight-5 columns,
    both in lexicographic order, then the identity check block.
    """
    data_columns = [
        sum(1 << i for i in combo)
        for weight in (3, 5)
        for combo in itertools.combinations(range(CHECK_BITS), weight)
    ][:WORD_BITS]
    return ParityMatrix(data_columns + [1 << i for i in range(CHECK_BITS)])


class SecdedCodec(EccCodec):
    """
    Systematic single-error-correcting, double-error-detecting code
    over 64-bit words with 8 check bits.
    """

    name = "secded72"

    pm: ParityMatrix

    def __init__(self, pm: ParityMatrix | None = None):
        self.pm = pm or default_parity_matrix()
        self._odd_weight = self.pm.is_odd_weight

    def encode(self, word: int) -> int:
        check = 0
        for i, mask in enumerate(self.pm.row_masks):
            check |= ((word & mask).bit_count() & 1) << i
        return check

    def syndrome(self, word: int, check: int) -> int:
        return check ^ self.encode(word)

    def decode(self, word: int, check: int) -> tuple[int, EccOutcome]:
        s = self.syndrome(word, check)
        if s == 0:
            return word, EccOutcome(EccOutcomeKindEnum.CLEAN)

        position = self.pm.position_of(s)
        if position is not None:
            if position < WORD_BITS:
                word ^= 1 << position
            return word, EccOutcome(EccOutcomeKindEnum.CORRECTED_SINGLE, position)

        if self._odd_weight and s.bit_count() % 2 == 0:
            return word, EccOutcome(EccOutcomeKindEnum.DETECTED_DOUBLE)
        return word, EccOutcome(EccOutcomeKindEnum.UNCORRECTABLE)


def corrupt(word: int, check: int, positions: Iterable[int]) -> tuple[int, int]:
    """
    Flip codeword positions, 0-63 in the data word and 64-71 in the check bits.
    """
    for p in positions:
        if p < WORD_BITS:
            word ^= 1 << p
        else:
            check ^= 1 << (p - WORD_BITS)
    return word, check


@dataclass_json
@dataclass
class ExhaustiveReport:
    """
    Result of corrupting words at every single and double position.
    """

    words: int = 0
    singles: int = 0
    singles_corrected: int = 0
    doubles: int = 0
    doubles_flagged: int = 0
    silent: int = 0
    """
    Corruptions decoded as clean or corrected to a wrong word.
    """
    failures: list[str] = field(default_factory=list)
    """
    A bounded sample of failing cases.
    """

    @property
    def passed(self) -> bool:
        return (
            self.singles_corrected == self.singles
            and self.doubles_flagged == self.doubles
            and self.silent == 0
        )


_MAX_FAILURES = 16


def exhaustive_check(codec: SecdedCodec, words: Iterable[int]) -> ExhaustiveReport:
    """
    Corrupt every word at each of the 72 single positions and each of the
    C(72,2) position pairs, and check every single is corrected
    and every double is flagged.
    """
    report = ExhaustiveReport()
    pairs = list(itertools.combinations(range(CODE_BITS), 2))
    flagged = (EccOutcomeKindEnum.DETECTED_DOUBLE, EccOutcomeKindEnum.UNCORRECTABLE)

    def fail(text: str):
        if len(report.failures) < _MAX_FAILURES:
            report.failures.append(text)

    for word in words:
        report.words += 1
        check = codec.encode(word)
        for p in range(CODE_BITS):
            report.singles += 1
            bad_word, bad_check = corrupt(word, check, (p,))
            fixed, outcome = codec.decode(bad_word, bad_check)
            if fixed == word and outcome.kind == EccOutcomeKindEnum.CORRECTED_SINGLE:
                report.singles_corrected += 1
            else:
                if outcome.kind == EccOutcomeKindEnum.CLEAN or fixed != word:
                    report.silent += 1
                fail(f"word {word:#018x} single {p}: {outcome}")
        for pair in pairs:
            report.doubles += 1
            bad_word, bad_check = corrupt(word, check, pair)
            _, outcome = codec.decode(bad_word, bad_check)
            if outcome.kind in flagged:
                report.doubles_flagged += 1
            else:
                report.silent += 1
                fail(f"word {word:#018x} double {pair}: {outcome}")
    return report
