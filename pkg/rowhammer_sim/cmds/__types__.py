from __future__ import annotations as __future_annotations__

from abc import ABC, abstractmethod
from typing import TYPE_CHECKING

from .. import envs
from ..model import apply_overrides, load_config, parse_overrides

if TYPE_CHECKING:
    from argparse import ArgumentParser, Namespace, _SubParsersAction

    from ..model import SimConfig


class SubCommand(ABC):
    """
    Base class for sub-commands.
    """

    @staticmethod
    @abstractmethod
    def register(parser: _SubParsersAction):
        """
        Register the sub-command with the given parser.
        This method should add a new sub-parser to the provided parser
        and set the `func` attribute to the class constructor.

        Args:
            parser: The sub-parsers action to register the command with.

        """
        raise NotImplementedError

    @abstractmethod
    def run(self):
        """
        Run the sub-command.

        Raises:
            InputError:
                If an input is malformed.
            OSError:
                If a file cannot be read or written.
            InvariantError:
                If a checked invariant fails.

        """
        raise NotImplementedError


def add_config_arguments(parser: ArgumentParser):
    """
    Add the `--config` and `--set` options shared by sub-commands that build a configuration.
    """
    parser.add_argument(
        "--config",
        "-c",
        type=str,
        help="Simulation configuration file (YAML or JSON), defaults to ROWHAMMER_SIM_CONFIG",
    )
    parser.add_argument(
        "--set",
        dest="overrides",
        action="append",
        metavar="KEY=VALUE",
        default=[],
        help="Override a configuration option, repeatable",
    )


def resolve_config(args: Namespace, extra: dict[str, str] | None = None) -> SimConfig:
    """
    Load the configuration named by `--config` (or ROWHAMMER_SIM_CONFIG)
    and apply `--set` overrides, then `extra`.
    """
    path = getattr(args, "config", None) or envs.ROWHAMMER_SIM_CONFIG
    config = load_config(path)
    overrides = parse_overrides(getattr(args, "overrides", None))
    if extra:
        overrides.update(extra)
    return apply_overrides(config, overrides)
