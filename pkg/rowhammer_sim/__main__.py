# PYTHON_ARGCOMPLETE_OK
from __future__ import annotations as __future_annotations__

import logging
import sys
from argparse import ArgumentParser
from typing import NoReturn

import argcomplete

from . import commit_id, version
from .cmds import (
    AnalyzeSubCommand,
    CompareSubCommand,
    EccCheckSubCommand,
    GenerateMapSubCommand,
    RenderSubCommand,
    SimulateSubCommand,
    TrafficSubCommand,
)
from .logging import debug_log_exception, setup_logging
from .model import InputError, InvariantError

logger = logging.getLogger(__package__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_INVARIANT = 3


class _ArgumentParser(ArgumentParser):
    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> ArgumentParser:
    parser = _ArgumentParser(
        "rowhammer-sim",
        description="RowHammer DRAM Simulator CLI",
    )
    parser.add_argument(
        "--version",
        action="version",
        version=f"%(prog)s {version}({commit_id})",
        help="Show the version and exit",
    )

    # Register
    subcommand_parser = parser.add_subparsers(
        help="rowhammer-sim command helpers",
    )
    SimulateSubCommand.register(subcommand_parser)
    AnalyzeSubCommand.register(subcommand_parser)
    GenerateMapSubCommand.register(subcommand_parser)
    CompareSubCommand.register(subcommand_parser)
    EccCheckSubCommand.register(subcommand_parser)
    TrafficSubCommand.register(subcommand_parser)
    RenderSubCommand.register(subcommand_parser)
    return parser


def cli(argv: list[str] | None = None) -> int:
    """
    Run the command line and return its exit code:
    0 on success, 1 on usage errors, 2 on input errors, 3 on invariant failures.
    """
    parser = build_parser()

    # Autocomplete
    argcomplete.autocomplete(parser)

    # Parse
    args = parser.parse_args(argv)
    if not hasattr(args, "func"):
        parser.print_help(sys.stderr)
        return EXIT_USAGE

    # Run
    try:
        args.func(args).run()
    except InvariantError as e:
        debug_log_exception(logger, "Invariant failure")
        print(f"rowhammer-sim: invariant failure: {e}", file=sys.stderr)
        return EXIT_INVARIANT
    except (InputError, OSError) as e:
        debug_log_exception(logger, "Invalid input")
        print(f"rowhammer-sim: error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except KeyboardInterrupt:
        return EXIT_USAGE
    return EXIT_OK


def main():
    setup_logging()
    sys.exit(cli())


if __name__ == "__main__":
    main()
