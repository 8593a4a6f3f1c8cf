import pytest

from rowhammer_sim.cmds import random_words
from rowhammer_sim.ecc import (
    CODE_BITS,
    EccOutcomeKindEnum,
    EccStats,
    ParityMatrix,
    SecdedCodec,
    available_algorithms,
    corrupt,
    create_codec,
    default_parity_matrix,
    exhaustive_check,
    load_pmatrix,
    parse_pmatrix,
    save_pmatrix,
)
from rowhammer_sim.model import ConfigError, ParityMatrixError


def _general_matrix() -> ParityMatrix:
    # Distinct non-zero columns, some of even weight.
    data = [v for v in range(1, 256) if v.bit_count() > 1][:64]
    return ParityMatrix(data + [1 << i for i in range(8)])


def test_default_matrix():
    pm = default_parity_matrix()
    assert len(pm.columns) == CODE_BITS
    assert len(set(pm.columns)) == CODE_BITS
    assert pm.is_odd_weight
    assert sum(1 for c in pm.columns[:64] if c.bit_count() == 3) == 56
    assert sum(1 for c in pm.columns[:64] if c.bit_count() == 5) == 8


def test_general_matrix():
    assert not _general_matrix().is_odd_weight


def test_encode_decode_clean():
    codec = SecdedCodec()
    word = 0x0123_4567_89AB_CDEF
    decoded, outcome = codec.decode(word, codec.encode(word))
    assert decoded == word
    assert outcome.kind == EccOutcomeKindEnum.CLEAN
    assert codec.encode(0) == 0


@pytest.mark.parametrize("position", [0, 17, 63, 64, 71])
def test_single_correction(position):
    codec = SecdedCodec()
    word = 0xDEAD_BEEF_0000_FFFF
    decoded, outcome = codec.decode(*corrupt(word, codec.encode(word), [position]))
    assert decoded == word
    assert outcome.kind == EccOutcomeKindEnum.CORRECTED_SINGLE
    assert outcome.position == position
    assert str(outcome) == f"corrected_single({position})"


@pytest.mark.parametrize("pair", [(0, 1), (5, 63), (3, 70), (64, 71)])
def test_double_detection(pair):
    codec = SecdedCodec()
    word = 0xFFFF_FFFF_FFFF_FFFF
    _, outcome = codec.decode(*corrupt(word, codec.encode(word), pair))
    assert outcome.kind == EccOutcomeKindEnum.DETECTED_DOUBLE


def test_exhaustive_default():
    report = exhaustive_check(SecdedCodec(), random_words(100, seed=1))
    assert report.passed
    assert report.words == 100
    assert report.singles == report.singles_corrected == 100 * 72
    assert report.doubles == report.doubles_flagged == 100 * 2556
    assert report.silent == 0
    assert report.failures == []


def test_exhaustive_general_fails():
    report = exhaustive_check(SecdedCodec(_general_matrix()), random_words(2))
    assert not report.passed
    assert report.silent > 0
    assert 0 < len(report.failures) <= 16


@pytest.mark.parametrize(
    "name, columns, column",
    [
        ("too few columns", [1] * 71, None),
        ("zero column", [0] + [3] * 63 + [1 << i for i in range(8)], 0),
        ("duplicate column", [3, 3] + list(range(5, 67)) + [1 << i for i in range(8)], 1),
        ("wider than 8 bits", [256] + [3] * 63 + [1 << i for i in range(8)], 0),
    ],
)
def test_matrix_validation(name, columns, column):
    with pytest.raises(ParityMatrixError) as e:
        ParityMatrix(columns)
    assert e.value.column == column, f"case {name}"


def test_matrix_identity_block():
    data = list(default_parity_matrix().columns[:64])
    with pytest.raises(ParityMatrixError) as e:
        ParityMatrix(data + [1 << i for i in reversed(range(8))])
    assert e.value.column == 64


def test_dumps_parse():
    pm = default_parity_matrix()
    text = pm.dumps()
    lines = text.splitlines()
    assert len(lines) == 8
    assert all(len(line) == 72 for line in lines)
    # Identity block.
    assert [line[64:] for line in lines] == ["".join("1" if j == i else "0" for j in range(8)) for i in range(8)]

    commented = "# hsiao\n\n" + "\n".join(" ".join(line[k : k + 8] for k in range(0, 72, 8)) for line in lines)
    assert parse_pmatrix(commented) == pm


@pytest.mark.parametrize(
    "name, text",
    [
        ("seven rows", "0" * 72 + "\n" * 1 + ("0" * 72 + "\n") * 6),
        ("short row", ("0" * 71 + "\n") * 8),
        ("bad character", ("2" * 72 + "\n") * 8),
    ],
)
def test_parse_invalid(name, text):
    with pytest.raises(ParityMatrixError):
        parse_pmatrix(text)


def test_save_load(tmp_path):
    path = tmp_path / "pmatrix.txt"
    save_pmatrix(default_parity_matrix(), path)
    assert load_pmatrix(path) == default_parity_matrix()
    with pytest.raises(OSError):
        load_pmatrix(tmp_path / "missing.txt")


def test_create_codec():
    assert available_algorithms() == ["secded72"]
    assert isinstance(create_codec("secded72"), SecdedCodec)
    with pytest.raises(ConfigError):
        create_codec("chipkill")


def test_stats_record():
    codec = SecdedCodec()
    stats = EccStats()
    for positions in ([], [1], [1, 2]):
        _, outcome = codec.decode(*corrupt(0, codec.encode(0), positions))
        stats.record(outcome)
    assert (stats.clean, stats.single_errors_corrected, stats.double_errors_detected) == (1, 1, 1)
    assert stats.protected_reads == 3
