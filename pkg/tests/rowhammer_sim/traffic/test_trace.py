import pytest

from rowhammer_sim.model import DeviceAddress, TraceError
from rowhammer_sim.simulator import Command, CommandKindEnum
from rowhammer_sim.traffic import (
    format_command,
    iter_trace,
    parse_trace,
    parse_trace_line,
    read_trace,
    to_byte_address,
    write_trace,
)
from tests.rowhammer_sim.fixtures import load, small_config

_GEOMETRY = small_config().geometry


@pytest.mark.parametrize(
    "name, kwargs, expected",
    load(
        "test_parse_trace_line.json",
    ),
)
def test_parse_trace_line(name, kwargs, expected):
    command = parse_trace_line(kwargs["text"], 1, _GEOMETRY)
    payload = bytes.fromhex(expected["payload"]) if expected["payload"] else None
    assert command.tick == expected["tick"], f"case {name}"
    assert command.kind == CommandKindEnum(expected["kind"]), f"case {name}"
    assert command.address == DeviceAddress(
        channel=expected["channel"],
        rank=expected["rank"],
        bank=expected["bank"],
        row=expected["row"],
        column=expected["column"],
    ), f"case {name}"
    assert command.payload == payload, f"case {name}"


def test_parse_refresh():
    assert parse_trace_line("10 REF 0", 1, _GEOMETRY) == Command.refresh(10, 0)
    assert parse_trace_line("10 ref 1:1", 1, _GEOMETRY) == Command.refresh(10, 1, channel=1)


@pytest.mark.parametrize("text", ["", "   ", "# only a comment"])
def test_parse_blank(text):
    assert parse_trace_line(text, 1, _GEOMETRY) is None


@pytest.mark.parametrize(
    "name, text",
    [
        ("too few fields", "10 ACT"),
        ("unknown command", "10 PRE 0 0 1"),
        ("bad tick", "ten ACT 0 0 1"),
        ("negative row", "10 ACT 0 0 -1"),
        ("refresh with bank", "10 REF 0 1"),
        ("payload on read", "10 RD 0x40 ff"),
        ("bad payload", "10 WR 0 0 1 0 xyz"),
        ("too many fields", "10 ACT 0 0 1 0 ff"),
        ("byte address out of range", "10 ACT 0x100000"),
    ],
)
def test_parse_invalid(name, text):
    with pytest.raises(TraceError) as e:
        parse_trace_line(text, 42, _GEOMETRY)
    assert e.value.line == 42, f"case {name}"
    assert str(e.value).startswith("line 42: ")


def test_parse_out_of_order():
    lines = ["10 ACT 0 0 1", "# note", "5 ACT 0 0 2"]
    commands = parse_trace(lines, _GEOMETRY)
    assert next(commands).tick == 10
    with pytest.raises(TraceError) as e:
        next(commands)
    assert e.value.line == 3


def test_format_command():
    assert format_command(Command.act(10, 0, 3, 17)) == "10 ACT 0 3 17"
    assert format_command(Command.read(10, 0, 3, 17, 4, channel=1)) == "10 RD 1:0 3 17 4"
    assert format_command(Command.write(10, 0, 0, 1, 0, b"\xde\xad")) == "10 WR 0 0 1 0 dead"
    assert format_command(Command.refresh(10, 1)) == "10 REF 1"
    assert format_command(Command.act(10, 0, 0, 1), _GEOMETRY) == "10 ACT 0x40"


def test_to_byte_address():
    assert to_byte_address(Command.read(0, 0, 0, 2, 5), _GEOMETRY) == 2 * 64 + 5


def test_write_read(tmp_path):
    commands = [
        Command.act(10, 0, 0, 4),
        Command.write(20, 0, 0, 4, 8, b"\x01\x02"),
        Command.read(30, 0, 0, 4, 8),
        Command.refresh(40, 0),
    ]
    for geometry in (None, _GEOMETRY):
        path = tmp_path / "trace.txt"
        assert write_trace(commands, path, geometry) == 4
        assert read_trace(path, _GEOMETRY) == commands
        assert list(iter_trace(path, _GEOMETRY)) == commands
