from __future__ import annotations as __future_annotations__

import logging
import sys
from pathlib import Path
from typing import TYPE_CHECKING

from .. import envs
from ..model import ConfigError
from ..simulator import Engine, format_bitflip
from ..traffic import generate, iter_trace, parse_traffic_spec, write_trace
from .__types__ import SubCommand, add_config_arguments, resolve_config

if TYPE_CHECKING:
    from argparse import Namespace, _SubParsersAction
    from collections.abc import Iterable

    from ..model import SimConfig
    from ..simulator import BitflipRecord, Command

logger = logging.getLogger(__name__)


def load_commands(
    config: SimConfig,
    trace: str | None = None,
    traffic: str | None = None,
) -> Iterable[Command]:
    """
    Return the command stream of a run:
    the trace file when given, else the `--traffic` spec,
    else the configured synthetic traffic.

    Raises:
        ConfigError:
            If there is nothing to simulate.

    """
    if trace:
        return iter_trace(trace, config.geometry, config.address_mapping)
    spec = parse_traffic_spec(traffic, "traffic") if traffic else config.synthetic_traffic
    if spec is None:
        msg = "no trace, --traffic or synthetic_traffic given"
        raise ConfigError("trace", msg)
    return generate(spec, config.geometry)


class SimulateSubCommand(SubCommand):
    """
    Command to run a trace or synthetic attack through the simulator.
    """

    trace: str | None
    traffic: str | None
    report: str | None
    dump_memory: str | None

    @staticmethod
    def register(parser: _SubParsersAction):
        simulate_parser = parser.add_parser(
            "simulate",
            help="Run a trace or a synthetic attack through the simulator",
        )
        add_config_arguments(simulate_parser)

        source = simulate_parser.add_mutually_exclusive_group()
        source.add_argument(
            "--trace",
            "-t",
            type=str,
            help="Trace file to replay",
        )
        source.add_argument(
            "--traffic",
            type=str,
            help="Synthetic traffic as key=value;..., e.g. pattern=double_sided;rows=100;rounds=1000",
        )

        simulate_parser.add_argument(
            "--map",
            type=str,
            help="Device map file, overrides device_file",
        )
        simulate_parser.add_argument(
            "--report",
            "-o",
            type=str,
            help="Write the JSON report to this file instead of stdout, bitflip lines then go to stdout instead of stderr",
        )
        simulate_parser.add_argument(
            "--dump-memory",
            type=str,
            help="Write a hex dump of every touched row to this file",
        )

        simulate_parser.set_defaults(func=SimulateSubCommand)

    def __init__(self, args: Namespace):
        extra = {"device_file": args.map} if args.map else None
        self.config = resolve_config(args, extra)
        self.trace = args.trace
        self.traffic = args.traffic
        self.report = args.report
        self.dump_memory = args.dump_memory

    def run(self):
        commands = load_commands(self.config, self.trace, self.traffic)

        on_bitflip = None
        if envs.ROWHAMMER_SIM_PRINT_BITFLIPS:
            channels = self.config.geometry.channels
            # stdout holds only the JSON report when no --report file is given.
            stream = sys.stdout if self.report else sys.stderr

            def on_bitflip(record: BitflipRecord):
                print(f"bitflip {format_bitflip(record, channels)}", file=stream)

        engine = Engine(self.config, on_bitflip=on_bitflip)
        report = engine.run(commands)
        if self.dump_memory:
            engine.dump_memory(self.dump_memory)

        text = report.to_json(indent=2, sort_keys=True)
        if self.report:
            Path(self.report).write_text(text + "\n", encoding="utf-8")
        else:
            sys.stdout.write(text + "\n")


class TrafficSubCommand(SubCommand):
    """
    Command to write a synthetic attack as a trace file.
    """

    traffic: str | None
    output: str
    byte_address: bool

    @staticmethod
    def register(parser: _SubParsersAction):
        traffic_parser = parser.add_parser(
            "traffic",
            help="Write a synthetic attack as a trace file",
        )
        add_config_arguments(traffic_parser)

        traffic_parser.add_argument(
            "--traffic",
            type=str,
            help="Synthetic traffic as key=value;..., defaults to synthetic_traffic",
        )
        traffic_parser.add_argument(
            "--output",
            "-o",
            type=str,
            required=True,
            help="Trace file to write",
        )
        traffic_parser.add_argument(
            "--byte-address",
            action="store_true",
            help="Write byte addresses instead of coordinates",
        )

        traffic_parser.set_defaults(func=TrafficSubCommand)

    def __init__(self, args: Namespace):
        self.config = resolve_config(args)
        self.traffic = args.traffic
        self.output = args.output
        self.byte_address = args.byte_address

    def run(self):
        commands = load_commands(self.config, traffic=self.traffic)
        geometry = self.config.geometry if self.byte_address else None
        count = write_trace(commands, self.output, geometry, self.config.address_mapping)
        logger.info("Wrote %d command(s) to %s", count, self.output)
