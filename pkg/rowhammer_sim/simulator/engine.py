from __future__ import annotations as __future_annotations__

import logging
from functools import partial
from pathlib import Path
from typing import TYPE_CHECKING

from tqdm import tqdm

from .. import envs
from ..devicemap.__types__ import DeviceMap
from ..ecc import WORD_BYTES, create_codec, load_pmatrix
from ..mitigation import create_mitigation
from ..model import AddressError, InvariantError, TraceError
from .__types__ import (
    BankHammerState,
    BitflipRecord,
    CommandKindEnum,
    PatternClassEnum,
    PatternProbabilities,
    ReadResult,
    RefreshRecord,
    SimReport,
    WindowReport,
)
from .memory import MemoryImage
from .rng import CounterRng
from .tracker import (
    classify,
    evaluate_faults,
    expose,
    on_trr_refresh,
    repair,
    reset_window,
    victims_of,
)

if TYPE_CHECKING:
    from collections.abc import Callable, Iterable

    from ..ecc import EccCodec
    from ..mitigation import Mitigation, TrrStats
    from ..model import DeviceAddress, SimConfig
    from .__types__ import Command

logger = logging.getLogger(__name__)

BankKey = tuple[int, int, int]
"""
(channel, rank, bank) of a hammer state.
"""

WordKey = tuple[int, int, int, int, int]
"""
(channel, rank, bank, row, word index) of an ECC snapshot.
"""


def format_bitflip(record: BitflipRecord, channels: int = 1) -> str:
    """
    Render a bitflip as `<tick> <[channel:]rank> <bank> <row> <column> <pattern>`,
    the channel prefix only on multi-channel devices.
    """
    rank = f"{record.channel}:{record.rank}" if channels > 1 else str(record.rank)
    return f"{record.tick} {rank} {record.bank} {record.row} {record.column} {record.pattern}"


class Engine:
    """
    Trace-driven simulation of one device.

    Commands are processed in stream order. Before a command runs,
    every refresh due by its tick is issued and every crossed
    refresh-window boundary is rolled over, in time order.
    """

    config: SimConfig
    device_map: DeviceMap
    memory: MemoryImage
    report: SimReport
    bitflips: list[BitflipRecord]
    """
    Every injected bitflip, in injection order.
    """
    trr_lines: list[str]
    """
    One TRR stats line per closed window.
    """

    def __init__(
        self,
        config: SimConfig,
        device_map: DeviceMap | None = None,
        observer: Callable[[BankHammerState, int, PatternClassEnum, bool], None] | None = None,
        on_bitflip: Callable[[BitflipRecord], None] | None = None,
        sample_faults: bool = True,
    ):
        """
        Args:
            config:
                Validated configuration.
            device_map:
                Weak-cell map, resolved from the configuration when None.
            observer:
                Called with (state, victim, pattern, qualifying) for every neighbour evaluation.
            on_bitflip:
                Called with every injected bitflip.
            sample_faults:
                Draw bitflips, disable to only track exposure.

        Raises:
            ConfigError:
                If the configuration is invalid.
            OSError:
                If a referenced file cannot be read.
            InputError:
                If a referenced file is malformed.

        """
        config.validate()
        if device_map is None:
            from ..devicemap import resolve_device_map  # noqa: PLC0415

            device_map = resolve_device_map(config)

        self.config = config
        self.geometry = config.geometry
        self.timing = config.resolved_timing
        self.device_map = device_map
        self.observer = observer
        self.on_bitflip = on_bitflip
        self.sample_faults = sample_faults
        self.probs = PatternProbabilities.from_config(config)

        self.memory = MemoryImage(self.geometry, config.fill_pattern)
        self.codec: EccCodec | None = None
        if config.enable_ecc:
            self.codec = create_codec(config.ecc_algorithm, load_pmatrix(config.p_matrix))
        self.snapshots: dict[WordKey, int] = {}

        self.fault_rng = CounterRng(config.rng_seed, "faults")
        self.trr_rng = CounterRng(config.rng_seed, "trr")
        self.states: dict[BankKey, BankHammerState] = {}
        self.mitigations: dict[tuple[int, int], Mitigation] = {
            (ch, rank): create_mitigation(config.trr_variant, config, ch, rank)
            for ch in range(self.geometry.channels)
            for rank in range(self.geometry.ranks_per_channel)
        }
        self.refresh_pointers: dict[tuple[int, int], int] = {}

        self.now = 0
        self.window = 0
        self.next_refresh = 0
        self.in_refresh = False
        self.report = SimReport()
        self.current = WindowReport(window=0)
        self.bitflips = []
        self.trr_lines = []
        self._started = False
        self._finished = False
        self._warned_ref = False

    def state(self, channel: int, rank: int, bank: int) -> BankHammerState:
        """
        Return the hammer state of a bank, created on first use.
        """
        key = (channel, rank, bank)
        state = self.states.get(key)
        if state is None:
            state = BankHammerState(channel=channel, rank=rank, bank=bank, window=self.window)
            self.states[key] = state
        return state

    def run(self, commands: Iterable[Command]) -> SimReport:
        """
        Process a command stream and close the run.

        Returns:
            The report of the run.

        Raises:
            TraceError:
                If ticks decrease.
            AddressError:
                If a command addresses outside the geometry.

        """
        with tqdm(
            commands,
            desc="Simulating",
            unit="cmd",
            disable=not envs.ROWHAMMER_SIM_PROGRESS,
        ) as pbar:
            for command in pbar:
                self.step(command)
        return self.finish()

    def step(self, command: Command):
        """
        Process one command.
        """
        if command.tick < self.now:
            msg = f"tick {command.tick} precedes the current tick {self.now}"
            raise TraceError(msg)
        self.advance(command.tick)

        match command.kind:
            case CommandKindEnum.ACT:
                self.on_activate(command.address, command.tick)
            case CommandKindEnum.RD:
                self.on_read(command.address, command.tick)
            case CommandKindEnum.WR:
                self.on_write(command.address, command.payload or b"", command.tick)
            case CommandKindEnum.REF:
                if self.config.auto_refresh and not self._warned_ref:
                    logger.warning("Trace carries REF commands while auto refresh is enabled")
                    self._warned_ref = True
                self.on_refresh(command.channel, command.rank, command.tick)

    def advance(self, tick: int):
        """
        Move time forward to `tick`, issuing due refreshes
        and rolling over crossed window boundaries in time order.
        """
        self._started = True
        t_refw = self.timing.t_refw
        while True:
            boundary = (self.window + 1) * t_refw
            if self.config.auto_refresh and self.next_refresh <= tick and self.next_refresh < boundary:
                at = self.next_refresh
                self.next_refresh += self.timing.t_refi
                for channel, rank in self.mitigations:
                    self.on_refresh(channel, rank, at)
                continue
            if boundary <= tick:
                self.rollover()
                continue
            break
        self.now = tick

    def rollover(self):
        """
        Close the current refresh window and open the next one,
        clearing every hammer counter.
        """
        self._close_window()
        self.window += 1
        self.current = WindowReport(window=self.window)
        for state in self.states.values():
            reset_window(state, self.window)
        if not self.config.trr_persist_tables:
            for mitigation in self.mitigations.values():
                mitigation.clear()

    def _close_window(self):
        totals = [m.reset_window_stats() for m in self.mitigations.values()]
        samples = sum(s.samples for s in totals)
        queued = sum(s.queued for s in totals)
        refreshed = sum(s.refreshed for s in totals)
        occupancy = sum(s.occupancy for s in totals)
        self.trr_lines.append(f"{self.window} {samples} {queued} {refreshed} {occupancy}")
        self.report.windows.append(self.current)
        if self.current.bitflips:
            logger.info(
                "Window %d closed with %d bitflip(s) over %d activation(s)",
                self.window,
                self.current.bitflips,
                self.current.activations,
            )

    def window_trr_stats(self) -> list[TrrStats]:
        """
        Return the running TRR counters of the current window, per rank.
        """
        return [m.stats for m in self.mitigations.values()]

    def on_activate(self, address: DeviceAddress, tick: int) -> list[BitflipRecord]:
        """
        Activate a row: count it, let the mitigation sample it,
        and evaluate every victim within the blast radius.

        Returns:
            The bitflips injected by this activation.

        """
        address.validate(self.geometry)
        channel, rank, bank, row = address.channel, address.rank, address.bank, address.row
        state = self.state(channel, rank, bank)
        state.acts[row] = state.acts.get(row, 0) + 1
        self.report.activations += 1
        self.current.activations += 1

        self.mitigations[(channel, rank)].sample(bank, row, self.trr_rng, self.window)

        threshold = self.config.rowhammer_threshold
        flips: list[BitflipRecord] = []
        for victim in victims_of(row, self.geometry.rows_per_bank):
            pattern = classify(state.acts, row, victim)
            if self.sample_faults:
                new = evaluate_faults(
                    state,
                    self.device_map,
                    victim,
                    pattern,
                    self.probs,
                    threshold,
                    self.fault_rng,
                    tick,
                )
                for record in new:
                    self._inject(record)
                flips.extend(new)
                qualifying = state.exposure[victim] >= threshold
            else:
                qualifying = expose(state, victim, threshold)
            if self.observer is not None:
                self.observer(state, victim, pattern, qualifying)
        return flips

    def _inject(self, record: BitflipRecord):
        self.report.count(record.pattern)
        self.current.count(record.pattern)
        self.bitflips.append(record)
        logger.debug(
            "Bitflip at rank %d bank %d row %d column %d (%s)",
            record.rank,
            record.bank,
            record.row,
            record.column,
            record.pattern,
        )

        if self.config.enable_memory_corruption:
            key = (record.channel, record.rank, record.bank, record.row)
            if self.codec is not None:
                word = record.column // (WORD_BYTES * 8)
                skey = (*key, word)
                if skey not in self.snapshots:
                    self.snapshots[skey] = self._load_word(key, word)
            self.memory.apply_flip(
                record.rank,
                record.bank,
                record.row,
                record.column,
                record.channel,
            )

        if self.on_bitflip is not None:
            self.on_bitflip(record)

    def _word_span(self, word: int) -> tuple[int, int]:
        offset = word * WORD_BYTES
        return offset, min(WORD_BYTES, self.geometry.bytes_per_row - offset)

    def _load_word(self, key: tuple[int, int, int, int], word: int) -> int:
        offset, length = self._word_span(word)
        return int.from_bytes(self.memory.read_bytes(key, offset, length), "little")

    def on_refresh(self, channel: int, rank: int, tick: int) -> RefreshRecord:
        """
        Refresh a rank: the next rows round-robin in every bank,
        then up to the per-REF budget of pending TRR victims.
        Already flipped cells stay flipped.

        Returns:
            The rows refreshed.

        Raises:
            AddressError:
                If the rank is outside the geometry.

        """
        g = self.geometry
        for name, value, bound in (("channel", channel, g.channels), ("rank", rank, g.ranks_per_channel)):
            if not 0 <= value < bound:
                msg = f"REF {name} {value} out of range [0, {bound})"
                raise AddressError(msg)
        rows_per_bank = self.geometry.rows_per_bank
        per_refi = self.timing.rows_refreshed_per_refi
        pointer = self.refresh_pointers.get((channel, rank), 0)
        rows = tuple(sorted({(pointer + i) % rows_per_bank for i in range(per_refi)}))
        self.refresh_pointers[(channel, rank)] = (pointer + per_refi) % rows_per_bank
        self.report.refreshes += 1

        mitigation = self.mitigations[(channel, rank)]
        self.in_refresh = True
        try:
            victims = mitigation.inhibit(
                self.timing.max_trr_refreshes_per_refi,
                partial(self._refresh_victim, channel, rank),
            )
        finally:
            self.in_refresh = False

        if victims:
            self.report.trr_refreshes += len(victims)
            self.current.trr_refreshes += len(victims)
            logger.debug("REF at %d refreshed TRR victim(s) %s", tick, victims)
        return RefreshRecord(tick, channel, rank, rows, tuple(victims))

    def _refresh_victim(self, channel: int, rank: int, bank: int, row: int):
        if not self.in_refresh:
            msg = f"TRR refresh of bank {bank} row {row} outside of a REF"
            raise InvariantError(msg)
        state = self.states.get((channel, rank, bank))
        if state is not None:
            on_trr_refresh(state, row)

    def on_read(self, address: DeviceAddress, tick: int) -> ReadResult:  # noqa: ARG002
        """
        Read the 8-byte word holding the addressed column.
        With ECC the word is decoded against check bits of its last written content.

        Returns:
            The data as stored, or as corrected by ECC, and the decode outcome.

        """
        address.validate(self.geometry)
        self.report.reads += 1
        key = (address.channel, address.rank, address.bank, address.row)
        word = self.memory.offset_of(address) // WORD_BYTES
        current = self._load_word(key, word)
        _, length = self._word_span(word)

        if self.codec is None:
            return ReadResult(current.to_bytes(length, "little"))

        original = self.snapshots.get((*key, word))
        check = self.codec.encode(current if original is None else original)
        decoded, outcome = self.codec.decode(current, check)
        miscorrected = original is not None and decoded != original
        self.report.ecc.record(outcome, miscorrected)
        if original is not None:
            logger.debug("ECC read of rank %d bank %d row %d word %d: %s", *key[1:], word, outcome)
        return ReadResult(decoded.to_bytes(length, "little"), outcome)

    def on_write(self, address: DeviceAddress, data: bytes, tick: int):  # noqa: ARG002
        """
        Write bytes from the addressed column onward,
        repairing the flipped cells they cover.

        Raises:
            AddressError:
                If the data runs past the end of the row.

        """
        address.validate(self.geometry)
        self.report.writes += 1
        key = (address.channel, address.rank, address.bank, address.row)
        offset = self.memory.offset_of(address)
        self.memory.write(address, data)
        if not data:
            return

        state = self.states.get((address.channel, address.rank, address.bank))
        if state is not None and state.flipped.get(address.row):
            lo, hi = offset * 8, (offset + len(data)) * 8
            covered = {c for c in state.flipped[address.row] if lo <= c < hi}
            if covered:
                repair(state, address.row, covered)

        if not self.snapshots:
            return
        end = offset + len(data)
        for word in range(offset // WORD_BYTES, (end - 1) // WORD_BYTES + 1):
            skey = (*key, word)
            original = self.snapshots.get(skey)
            if original is None:
                continue
            start, length = self._word_span(word)
            patched = bytearray(original.to_bytes(length, "little"))
            lo, hi = max(offset, start), min(end, start + length)
            patched[lo - start : hi - start] = data[lo - offset : hi - offset]
            value = int.from_bytes(patched, "little")
            if value == self._load_word(key, word):
                del self.snapshots[skey]
            else:
                self.snapshots[skey] = value

    def finish(self) -> SimReport:
        """
        Close the last window and write the configured stats files.

        Returns:
            The report of the run.

        Raises:
            OSError:
                If a stats file cannot be written.

        """
        if self._finished:
            return self.report
        self._finished = True
        if self._started:
            self._close_window()

        if self.config.rh_stat_file is not None:
            lines = [format_bitflip(r, self.geometry.channels) for r in self.bitflips]
            write_lines(self.config.rh_stat_file, lines)
        if self.config.trr_stats_dump is not None:
            write_lines(self.config.trr_stats_dump, self.trr_lines)

        logger.info(
            "Simulated %d activation(s) over %d window(s): %d bitflip(s), %d TRR refresh(es)",
            self.report.activations,
            len(self.report.windows),
            self.report.total_bitflips,
            self.report.trr_refreshes,
        )
        return self.report

    def dump_memory(self, path: str | Path):
        """
        Write a hex dump of every touched row.
        """
        write_lines(path, list(self.memory.hexdump()))


def write_lines(path: str | Path, lines: list[str]):
    """
    Write lines, newline-terminated.
    """
    text = "".join(f"{line}\n" for line in lines)
    Path(path).write_text(text, encoding="utf-8")


def simulate(
    commands: Iterable[Command],
    config: SimConfig,
    device_map: DeviceMap | None = None,
) -> SimReport:
    """
    Run a command stream through a fresh engine.

    Returns:
        The report of the run.

    """
    return Engine(config, device_map).run(commands)
