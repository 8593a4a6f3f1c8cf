from __future__ import annotations as __future_annotations__

import logging
from pathlib import Path
from typing import TYPE_CHECKING

from ..logging import debug_log_warning
from ..model import (
    AddressError,
    DeviceAddress,
    DeviceGeometry,
    MappingSchemeEnum,
    TraceError,
    decode_address,
    encode_address,
)
from ..model.__utils__ import iter_text_lines
from ..simulator.__types__ import Command, CommandKindEnum

if TYPE_CHECKING:
    from collections.abc import Iterable, Iterator

logger = logging.getLogger(__name__)


def _to_int(token: str, what: str, line: int) -> int:
    try:
        value = int(token, 0)
    except ValueError:
        msg = f"invalid {what} {token!r}"
        raise TraceError(msg, line) from None
    if value < 0:
        msg = f"negative {what} {token!r}"
        raise TraceError(msg, line)
    return value


def _to_rank(token: str, line: int) -> tuple[int, int]:
    # `<rank>` or `<channel>:<rank>`
    if ":" in token:
        channel, rank = token.split(":", 1)
        return _to_int(channel, "channel", line), _to_int(rank, "rank", line)
    return 0, _to_int(token, "rank", line)


def _to_payload(token: str, line: int) -> bytes:
    text = token.removeprefix("0x")
    try:
        return bytes.fromhex(text)
    except ValueError:
        msg = f"invalid hex payload {token!r}"
        raise TraceError(msg, line) from None


def parse_trace_line(
    text: str,
    line: int,
    geometry: DeviceGeometry,
    scheme: MappingSchemeEnum | str = MappingSchemeEnum.ROW_BANK_RANK_CHANNEL_COLUMN,
) -> Command | None:
    """
    Parse one trace record, None for blank and `#` comment lines.

    Records are either
    `<tick> <ACT|RD|WR> <[channel:]rank> <bank> <row> [column] [hex-payload]`,
    `<tick> REF <[channel:]rank>`, or
    `<tick> <ACT|RD|WR> <byte-address> [hex-payload]`.

    Raises:
        TraceError:
            If the record is malformed.

    """
    text = text.split("#", 1)[0].strip()
    if not text:
        return None
    tokens = text.split()
    if len(tokens) < 3:
        msg = f"expected at least 3 fields, got {len(tokens)}"
        raise TraceError(msg, line)

    tick = _to_int(tokens[0], "tick", line)
    try:
        kind = CommandKindEnum(tokens[1].upper())
    except ValueError:
        msg = f"unknown command {tokens[1]!r}"
        raise TraceError(msg, line) from None

    if kind == CommandKindEnum.REF:
        if len(tokens) != 3:
            msg = f"REF takes a rank only, got {len(tokens) - 2} field(s)"
            raise TraceError(msg, line)
        channel, rank = _to_rank(tokens[2], line)
        return Command.refresh(tick, rank, channel)

    payload: bytes | None = None
    if len(tokens) <= 4:
        if len(tokens) == 4:
            if kind != CommandKindEnum.WR:
                msg = f"{kind} takes a byte address or at least rank, bank and row"
                raise TraceError(msg, line)
            payload = _to_payload(tokens[3], line)
        addr = _to_int(tokens[2], "byte address", line)
        try:
            address = decode_address(addr, geometry, scheme)
        except AddressError as e:
            raise TraceError(str(e), line) from e
        if addr % geometry.column_bytes:
            debug_log_warning(
                logger,
                "Line %d: byte address %#x is not column aligned, decoded to its column",
                line,
                addr,
            )
        return Command(tick, kind, address, payload=payload)

    limit = 7 if kind == CommandKindEnum.WR else 6
    if len(tokens) > limit:
        msg = f"too many fields for {kind}: {len(tokens)}"
        raise TraceError(msg, line)
    channel, rank = _to_rank(tokens[2], line)
    bank = _to_int(tokens[3], "bank", line)
    row = _to_int(tokens[4], "row", line)
    column = _to_int(tokens[5], "column", line) if len(tokens) > 5 else 0
    if len(tokens) > 6:
        payload = _to_payload(tokens[6], line)
    address = DeviceAddress(channel=channel, rank=rank, bank=bank, row=row, column=column)
    return Command(tick, kind, address, payload=payload)


def parse_trace(
    lines: Iterable[str],
    geometry: DeviceGeometry | None = None,
    scheme: MappingSchemeEnum | str = MappingSchemeEnum.ROW_BANK_RANK_CHANNEL_COLUMN,
) -> Iterator[Command]:
    """
    Parse trace records lazily, checking that ticks never decrease.

    Raises:
        TraceError:
            At the first malformed or out-of-order record, with its line number.

    """
    geometry = geometry or DeviceGeometry()
    last = 0
    for number, text in enumerate(lines, start=1):
        command = parse_trace_line(text, number, geometry, scheme)
        if command is None:
            continue
        if command.tick < last:
            msg = f"tick {command.tick} precedes the previous tick {last}"
            raise TraceError(msg, number)
        last = command.tick
        yield command


def iter_trace(
    path: str | Path,
    geometry: DeviceGeometry | None = None,
    scheme: MappingSchemeEnum | str = MappingSchemeEnum.ROW_BANK_RANK_CHANNEL_COLUMN,
) -> Iterator[Command]:
    """
    Stream the commands of a trace file.

    Raises:
        OSError:
            If the file cannot be read.
        TraceError:
            At the first malformed or out-of-order record.

    """
    yield from parse_trace(iter_text_lines(path), geometry, scheme)


def read_trace(
    path: str | Path,
    geometry: DeviceGeometry | None = None,
    scheme: MappingSchemeEnum | str = MappingSchemeEnum.ROW_BANK_RANK_CHANNEL_COLUMN,
) -> list[Command]:
    """
    Read every command of a trace file.

    Args:
        path:
            The trace file.
        geometry:
            Geometry to decode byte addresses against, the default geometry when None.
        scheme:
            Mapping scheme to decode byte addresses with.

    Returns:
        The commands in file order.

    Raises:
        OSError:
            If the file cannot be read.
        TraceError:
            At the first malformed or out-of-order record.

    """
    commands = list(iter_trace(path, geometry, scheme))
    logger.debug("Read %d command(s) from %s", len(commands), path)
    return commands


def format_command(
    command: Command,
    geometry: DeviceGeometry | None = None,
    scheme: MappingSchemeEnum | str = MappingSchemeEnum.ROW_BANK_RANK_CHANNEL_COLUMN,
) -> str:
    """
    Render a command as a trace record,
    in the byte-address form when a geometry is given, else in the coordinate form.
    """
    if command.kind == CommandKindEnum.REF:
        rank = f"{command.channel}:{command.rank}" if command.channel else str(command.rank)
        return f"{command.tick} REF {rank}"

    if geometry is not None:
        fields = [str(command.tick), str(command.kind), hex(to_byte_address(command, geometry, scheme))]
        if command.payload:
            fields.append(command.payload.hex())
        return " ".join(fields)

    a = command.address
    rank = f"{a.channel}:{a.rank}" if a.channel else str(a.rank)
    fields = [str(command.tick), str(command.kind), rank, str(a.bank), str(a.row)]
    if command.kind != CommandKindEnum.ACT or a.column or command.payload:
        fields.append(str(a.column))
    if command.payload:
        fields.append(command.payload.hex())
    return " ".join(fields)


def write_trace(
    commands: Iterable[Command],
    path: str | Path,
    geometry: DeviceGeometry | None = None,
    scheme: MappingSchemeEnum | str = MappingSchemeEnum.ROW_BANK_RANK_CHANNEL_COLUMN,
) -> int:
    """
    Write commands as a trace file, one record per line,
    with byte addresses when a geometry is given.

    Returns:
        The number of commands written.

    Raises:
        OSError:
            If the file cannot be written.

    """
    count = 0
    with Path(path).open("w", encoding="utf-8") as f:
        for command in commands:
            f.write(format_command(command, geometry, scheme))
            f.write("\n")
            count += 1
    return count


def to_byte_address(
    command: Command,
    geometry: DeviceGeometry,
    scheme: MappingSchemeEnum | str = MappingSchemeEnum.ROW_BANK_RANK_CHANNEL_COLUMN,
) -> int:
    """
    Return the byte address a coordinate command targets.

    Raises:
        AddressError:
            If the command has no address or it is out of range.

    """
    if command.address is None:
        msg = f"{command.kind} at tick {command.tick} carries no address"
        raise AddressError(msg)
    return encode_address(command.address, geometry, scheme)
