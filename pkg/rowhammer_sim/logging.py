from __future__ import annotations as __future_annotations__

import logging
import re
import sys
from typing import Any

from tqdm import tqdm

from . import envs

DEFAULT_LOG_FORMAT = "%(asctime)s - %(process)d - %(name)s - %(levelname)s - %(message)s"

_LEVEL_NAMES = ("CRITICAL", "ERROR", "WARNING", "INFO", "DEBUG", "NOTSET")

_LEVEL_ITEM = re.compile(r"^\s*(?:(?P<module>[^:=]*)[:=])?\s*(?P<level>\w+)\s*$")


class TqdmStreamHandler(logging.StreamHandler):
    """
    Stream handler writing through `tqdm.write`,
    so records do not tear an active simulation progress bar.
    """

    def emit(self, record: logging.LogRecord):
        try:
            tqdm.write(self.format(record), file=self.stream)
            self.flush()
        except RecursionError:
            raise
        except Exception:  # noqa: BLE001
            self.handleError(record)


def _parse_module_levels(level_str: str) -> dict[str, int]:
    """
    Parse ROWHAMMER_SIM_LOG_LEVEL into {module: level}, "" being the package default.

    Items are separated by ';', each either a bare level or `module:level` / `module=level`,
    with the module given relative to the package, dotted or slashed.
    For example "ERROR;simulator.tracker:DEBUG" keeps everything at ERROR except the tracker.
    Items with an unknown level are skipped.
    """
    module_levels: dict[str, int] = {}
    for item in (level_str or "").split(";"):
        m = _LEVEL_ITEM.match(item)
        if not m or m["level"].upper() not in _LEVEL_NAMES:
            continue
        module = (m["module"] or "").strip().replace("/", ".")
        module = module.removeprefix(f"{__package__}.").strip(".")
        module_levels[module] = logging.getLevelName(m["level"].upper())
    return module_levels


def setup_logging():
    """
    Attach the console handler, and the file handler if ROWHAMMER_SIM_LOG_TO_FILE is set,
    to the package logger and apply the levels of ROWHAMMER_SIM_LOG_LEVEL (default INFO).

    Calling it again replaces the previous setup.
    """
    module_levels = _parse_module_levels(envs.ROWHAMMER_SIM_LOG_LEVEL or "INFO")
    formatter = logging.Formatter(DEFAULT_LOG_FORMAT)

    handlers: list[logging.Handler] = [TqdmStreamHandler(sys.stderr)]
    if log_file := envs.ROWHAMMER_SIM_LOG_TO_FILE:
        handlers.append(logging.FileHandler(log_file, mode="a"))
    for handler in handlers:
        handler.setFormatter(formatter)

    package_logger = logging.getLogger(__package__)
    for handler in package_logger.handlers:
        handler.close()
    package_logger.handlers = handlers
    package_logger.setLevel(module_levels.pop("", logging.INFO))
    package_logger.propagate = False

    # Children keep propagating to the package handlers.
    for module, level in module_levels.items():
        logging.getLogger(f"{__package__}.{module}").setLevel(level)


def debug_log_warning(logger: logging.Logger, msg: str, *args: Any):
    """
    Log a warning, only at DEBUG level and with ROWHAMMER_SIM_LOG_WARNING enabled.
    """
    if logger.isEnabledFor(logging.DEBUG) and envs.ROWHAMMER_SIM_LOG_WARNING:
        logger.warning(msg, *args)


def debug_log_exception(logger: logging.Logger, msg: str, *args: Any):
    """
    Log the active exception, only at DEBUG level and with ROWHAMMER_SIM_LOG_EXCEPTION enabled.
    """
    if logger.isEnabledFor(logging.DEBUG) and envs.ROWHAMMER_SIM_LOG_EXCEPTION:
        logger.exception(msg, *args)
