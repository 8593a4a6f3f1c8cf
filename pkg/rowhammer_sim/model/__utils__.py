from __future__ import annotations as __future_annotations__

import json
from pathlib import Path
from typing import TYPE_CHECKING, Any

import yaml

from .__types__ import ConfigError, InputError, TraceError

if TYPE_CHECKING:
    from collections.abc import Iterator


def load_yaml_or_json(path: str | Path) -> dict[str, Any]:
    """
    Load a YAML or JSON document holding a single mapping.

    Args:
        path:
            The path to the document, `.yaml`, `.yml` or `.json`.

    Returns:
        The loaded mapping, empty for an empty document.

    Raises:
        FileNotFoundError:
            If the file does not exist.
        InputError:
            If the file cannot be parsed or is not a mapping.

    """
    if isinstance(path, str):
        path = Path(path)

    if not path.exists():
        msg = f"File not found: {path}"
        raise FileNotFoundError(msg)

    content = read_text(path)

    if path.suffix in {".yaml", ".yml"}:
        try:
            ret = yaml.safe_load(content)
        except yaml.YAMLError as e:
            msg = f"Failed to parse YAML file: {path}: {e}"
            raise InputError(msg) from e
    elif path.suffix == ".json":
        if not content.strip():
            ret = None
        else:
            try:
                ret = json.loads(content)
            except json.JSONDecodeError as e:
                msg = f"Failed to parse JSON file: {path}: {e}"
                raise InputError(msg) from e
    else:
        msg = f"Unsupported file format: {path.suffix}"
        raise InputError(msg)

    if ret is None:
        return {}
    if not isinstance(ret, dict):
        msg = f"Expected a mapping at the top of {path}, got {type(ret).__name__}"
        raise InputError(msg)
    return ret


def to_int(name: str, value: Any) -> int:
    """
    Coerce a configuration value to an integer,
    strings may carry a base prefix (e.g. `0xFF`) or an exponent (e.g. `1e6`).

    Raises:
        ConfigError:
            If the value is not an integer.

    """
    if isinstance(value, bool):
        raise ConfigError(name, f"expected an integer, got {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, float) and value.is_integer():
        return int(value)
    if isinstance(value, str):
        text = value.strip().replace("_", "")
        try:
            return int(text, 0)
        except ValueError:
            pass
        try:
            number = float(text)
        except ValueError:
            pass
        else:
            if number.is_integer():
                return int(number)
    raise ConfigError(name, f"expected an integer, got {value!r}")


def to_float(name: str, value: Any) -> float:
    """
    Coerce a configuration value to a float.

    Raises:
        ConfigError:
            If the value is not a number.

    """
    if isinstance(value, bool):
        raise ConfigError(name, f"expected a number, got {value!r}")
    if isinstance(value, int | float):
        return float(value)
    if isinstance(value, str):
        try:
            return float(value.strip())
        except ValueError:
            pass
    raise ConfigError(name, f"expected a number, got {value!r}")


def to_bool(name: str, value: Any) -> bool:
    """
    Coerce a configuration value to a boolean.

    Raises:
        ConfigError:
            If the value is not a recognizable boolean.

    """
    if isinstance(value, bool):
        return value
    if isinstance(value, int) and value in (0, 1):
        return bool(value)
    if isinstance(value, str):
        text = value.strip().lower()
        if text in ("1", "true", "yes", "on"):
            return True
        if text in ("0", "false", "no", "off"):
            return False
    raise ConfigError(name, f"expected a boolean, got {value!r}")


def to_path(name: str, value: Any, base: Path | None = None) -> Path | None:
    """
    Coerce a configuration value to a path,
    relative paths are anchored at `base` when given.

    Raises:
        ConfigError:
            If the value is not a string.

    """
    if value is None:
        return None
    if not isinstance(value, str | Path):
        raise ConfigError(name, f"expected a path, got {value!r}")
    if not str(value).strip():
        return None
    path = Path(str(value).strip()).expanduser()
    if base is not None and not path.is_absolute():
        path = base / path
    return path


def read_text(path: str | Path, error: type[InputError] = InputError) -> str:
    """
    Read a UTF-8 text file.

    Raises:
        OSError:
            If the file cannot be read.
        InputError:
            Of the given type, if the content is not valid UTF-8.

    """
    path = Path(path)
    try:
        return path.read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        msg = f"{path} is not valid UTF-8: {e.reason} at byte {e.start}"
        raise error(msg) from None


def iter_text_lines(path: str | Path) -> Iterator[str]:
    """
    Stream the lines of a UTF-8 text file, decoding one line at a time.

    Raises:
        OSError:
            If the file cannot be read.
        TraceError:
            At the first line that is not valid UTF-8, with its line number.

    """
    with Path(path).open("rb") as f:
        for number, raw in enumerate(f, start=1):
            try:
                yield raw.decode("utf-8")
            except UnicodeDecodeError as e:
                msg = f"not valid UTF-8: {e.reason} at column {e.start + 1}"
                raise TraceError(msg, number) from None
