"""Plot-ready CSV artifacts.

Every file starts with a ``# manifest_sha256=<hash>`` comment line followed by
the header row; floats use ``%.16e`` (17 significant digits, exact round trip).

Author: FPU Waves maintainers
Created: 2026-10-17
Version: 1.0.0
License: MIT
"""

import logging
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Sequence

import numpy as np
import pandas as pd

from utils.errors import ConfigurationError

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.16e"
HASH_PREFIX = "# manifest_sha256="


def write_frame_csv(frame: pd.DataFrame, output_path: Path, manifest_hash: str) -> Path:
    """Write a DataFrame with the manifest comment line."""
    output_path.parent.mkdir(parents=True, exist_ok=True)
    with open(output_path, "w", encoding="utf-8", newline="") as f:
        f.write(f"{HASH_PREFIX}{manifest_hash}\n")
        frame.to_csv(f, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    logger.info(f"Saved CSV: {output_path} ({len(frame)} rows)")
    return output_path


def write_columns_csv(output_path: Path, columns: Mapping[str, Iterable], manifest_hash: str) -> Path:
    """Write equal-length columns (in mapping order) as a CSV file."""
    frame = pd.DataFrame({name: np.asarray(values) for name, values in columns.items()})
    return write_frame_csv(frame, output_path, manifest_hash)


def write_rows_csv(output_path: Path, rows: Sequence[Dict], fieldnames: List[str], manifest_hash: str) -> Path:
    """Write a list of row dicts; missing fields become empty cells."""
    frame = pd.DataFrame(list(rows), columns=fieldnames)
    return write_frame_csv(frame, output_path, manifest_hash)


def read_manifest_hash(csv_path: Path) -> Optional[str]:
    """The hash on the first line, or None if the file has no manifest line."""
    with open(csv_path, "r", encoding="utf-8") as f:
        first = f.readline().strip()
    return first[len(HASH_PREFIX):] if first.startswith(HASH_PREFIX) else None


def read_csv(csv_path: Path) -> pd.DataFrame:
    """Read an artifact CSV, skipping comment lines.

    Raises:
        ConfigurationError: If the file does not exist.
    """
    if not Path(csv_path).is_file():
        raise ConfigurationError(f"CSV file not found: {csv_path}")
    return pd.read_csv(csv_path, comment="#", float_precision="round_trip")
