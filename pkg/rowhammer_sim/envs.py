from __future__ import annotations as __future_annotations__

from functools import lru_cache
from os import getenv as sys_getenv
from pathlib import Path
from typing import TYPE_CHECKING, Any

if TYPE_CHECKING:
    from collections.abc import Callable

    # Global

    ROWHAMMER_SIM_LOG_LEVEL: str | None = None
    """
    Log level for the rowhammer-sim.
    """
    ROWHAMMER_SIM_LOG_TO_FILE: Path | None = None
    """
    Path of file to log to, in addition to stderr.
    """
    ROWHAMMER_SIM_LOG_WARNING: bool = False
    """
    Enable logging warnings when ROWHAMMER_SIM_LOG_LEVEL=DEBUG.
    """
    ROWHAMMER_SIM_LOG_EXCEPTION: bool = True
    """
    Enable logging exceptions when ROWHAMMER_SIM_LOG_LEVEL=DEBUG.
    """

    ## Simulator
    ROWHAMMER_SIM_CONFIG: Path | None = None
    """
    Path of the simulation configuration file,
    used by `simulate` when no `--config` is given.
    """
    ROWHAMMER_SIM_PROGRESS: bool = False
    """
    Show progress bars on stderr for long simulations
    and for the Monte-Carlo consistency harness.
    """
    ROWHAMMER_SIM_PRINT_BITFLIPS: bool = True
    """
    Print a diagnostic line for every injected bitflip during `simulate`,
    to stdout when the report goes to a file, else to stderr.
    The simulated memory stays silent, this is the only place corruption is reported.
    """

# --8<-- [start:env-vars-definition]

variables: dict[str, Callable[[], Any]] = {
    # Global
    "ROWHAMMER_SIM_LOG_LEVEL": lambda: getenv(
        "ROWHAMMER_SIM_LOG_LEVEL",
        "INFO",
    ),
    "ROWHAMMER_SIM_LOG_TO_FILE": lambda: mkdir_path(
        getenv(
            "ROWHAMMER_SIM_LOG_TO_FILE",
        ),
        parents_only=True,
    ),
    "ROWHAMMER_SIM_LOG_WARNING": lambda: to_bool(
        getenv(
            "ROWHAMMER_SIM_LOG_WARNING",
            "0",
        ),
    ),
    "ROWHAMMER_SIM_LOG_EXCEPTION": lambda: to_bool(
        getenv(
            "ROWHAMMER_SIM_LOG_EXCEPTION",
            "1",
        ),
    ),
    ## Simulator
    "ROWHAMMER_SIM_CONFIG": lambda: to_path(
        getenv(
            "ROWHAMMER_SIM_CONFIG",
        ),
    ),
    "ROWHAMMER_SIM_PROGRESS": lambda: to_bool(
        getenv(
            "ROWHAMMER_SIM_PROGRESS",
            "0",
        ),
    ),
    "ROWHAMMER_SIM_PRINT_BITFLIPS": lambda: to_bool(
        getenv(
            "ROWHAMMER_SIM_PRINT_BITFLIPS",
            "1",
        ),
    ),
}


# --8<-- [end:env-vars-definition]


@lru_cache
def __getattr__(name: str):
    # lazy evaluation of environment variables
    if name in variables:
        return variables[name]()
    msg = f"module {__name__} has no attribute {name}"
    raise AttributeError(msg)


def __dir__():
    return list(variables.keys())


def mkdir_path(path: Path | str | None, parents_only: bool = False) -> Path | None:
    """
    Create a directory if it does not exist.

    Args:
        path (str | Path): The path to the directory.
        parents_only (bool): If True, only create parent directories.

    """
    if not path:
        return None
    if isinstance(path, str):
        path = Path(path)
    if parents_only:
        path.parent.mkdir(parents=True, exist_ok=True)
    else:
        path.mkdir(parents=True, exist_ok=True)
    return path


def to_path(value: str | None) -> Path | None:
    """
    Convert a string to an expanded path.

    Args:
        value:
            The string to convert.

    Returns:
        The expanded path, or None if the input is empty.

    """
    if not value or value.isspace():
        return None
    return Path(value.strip()).expanduser()


def to_bool(value: str | None) -> bool:
    """
    Convert a string to a boolean.

    Args:
        value:
            The value to check.

    Returns:
        bool: True if the value is considered true, False otherwise.

    """
    if value:
        return value.lower() in ("1", "true", "yes", "on")
    return False


def to_dict(
    value: str,
    sep: str = ";",
) -> dict[str, str]:
    """
    Convert a (sep)-separated string of `key=value` items to a dictionary.

    Args:
        value:
            The (sep)-separated string.
        sep:
            The separator used in the string.

    Returns:
        The resulting dictionary.

    """
    if not value:
        return {}

    result = {}
    for item in value.split(sep):
        if "=" in item:
            key, val = item.split("=", 1)
            key = key.strip()
            val = val.strip()
        else:
            key = item.strip()
            val = ""

        if key:
            result[key] = val
    return result


_ENV_PREFIX = "ROWHAMMER_SIM_"


def getenv(key: str, default=None) -> Any | None:
    """
    Get the value of an environment variable.
    Try headless module variable if the key starts with "ROWHAMMER_SIM_".

    Args:
        key:
            The environment variable key.
        default:
            The default value if the key is not found.

    Returns:
        The value of the environment variable if it exists, otherwise None.

    """
    value = sys_getenv(key)
    if value is not None:
        return value
    if key.startswith(_ENV_PREFIX):
        headless_key = key.removeprefix(_ENV_PREFIX)
        return sys_getenv(headless_key, default)
    return default
