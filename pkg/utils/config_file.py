"""Reader for plain-text run configuration files.

Syntax: one ``key = value`` per line, ``#`` starts a comment, blank lines are
ignored and list values are comma separated. Keys are ``RunConfig`` field
names; unknown keys are rejected.

Example:
    # sweep.cfg
    m = 2
    deltas = 0.2, 0.1, 0.05
    nodes_per_half = 256
"""

import logging
from pathlib import Path
from typing import Any, Dict, Iterable, Union

from utils.errors import ConfigurationError

logger = logging.getLogger(__name__)

LIST_KEYS = ("deltas",)


def parse_config_lines(lines: Iterable[str], known_keys: Iterable[str], source: str = "<config>") -> Dict[str, Any]:
    """Parse key = value lines into a dict of strings (lists for LIST_KEYS).

    Raises:
        ConfigurationError: On malformed lines, duplicate or unknown keys.
    """
    known = set(known_keys)
    values: Dict[str, Any] = {}
    for number, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"{source}:{number}: expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in known:
            raise ConfigurationError(f"{source}:{number}: unknown key {key!r}")
        if key in values:
            raise ConfigurationError(f"{source}:{number}: duplicate key {key!r}")
        if key in LIST_KEYS:
            values[key] = [item.strip() for item in value.split(",") if item.strip()]
        else:
            values[key] = value
    return values


def read_config_file(path: Union[str, Path], known_keys: Iterable[str]) -> Dict[str, Any]:
    """Read a configuration file.

    Raises:
        ConfigurationError: If the file is missing or malformed.
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigurationError(f"Configuration file not found: {path}")
    with open(path, "r", encoding="utf-8") as f:
        values = parse_config_lines(f, known_keys, source=str(path))
    logger.debug("Loaded %d settings from %s", len(values), path)
    return values
