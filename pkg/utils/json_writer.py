"""Utility for writing result summaries and waves to JSON files.

Floats are written through ``repr`` (17 significant digits when needed), which
round-trips IEEE doubles exactly; keys are sorted and indented by 2 spaces so
reruns produce byte-identical files.

Author: FPU Waves maintainers
Created: 2026-10-17
Version: 1.0.0
License: MIT

Functions:
    save_json: Save a payload (dict or pydantic model) to a JSON file.
    load_json: Load a JSON payload.
    save_wave_json: Save a wave with its profiles and manifest hash.
    load_wave_json: Rebuild a WaveSolution from a saved JSON file.
"""

import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np
from pydantic import BaseModel, ValidationError

from models.wave_solution import Grid, WaveSolution

logger = logging.getLogger(__name__)


def _plain(value: Any) -> Any:
    """Convert numpy and pydantic values into JSON-native types."""
    if isinstance(value, BaseModel):
        return _plain(value.model_dump())
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def save_json(
    payload: Union[Dict[str, Any], BaseModel],
    output_path: Path,
    overwrite: bool = True,
    manifest_hash: Optional[str] = None,
) -> bool:
    """Save a payload to a JSON file.

    Args:
        payload: Dictionary or pydantic model.
        output_path: Target file; parent directories are created.
        overwrite: If False, an existing file is left untouched.
        manifest_hash: Stored under ``manifest_hash`` when given.

    Returns:
        bool: True if saved, False if skipped or failed.
    """
    try:
        if output_path.exists() and not overwrite:
            logger.info(f"JSON file already exists, skipping: {output_path.name}")
            return False

        data = _plain(payload)
        if manifest_hash is not None:
            data["manifest_hash"] = manifest_hash

        output_path.parent.mkdir(parents=True, exist_ok=True)
        with open(output_path, "w", encoding="utf-8") as f:
            json.dump(data, f, indent=2, sort_keys=True, ensure_ascii=False)
            f.write("\n")

        logger.info(f"Saved JSON: {output_path}")
        return True

    except (OSError, TypeError, ValueError) as e:
        logger.error(f"Error saving JSON to {output_path}: {str(e)}")
        return False


def load_json(json_path: Path) -> Optional[Dict[str, Any]]:
    """Load a JSON payload, or None if the file is missing or malformed."""
    try:
        with open(json_path, "r", encoding="utf-8") as f:
            return json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        logger.error(f"Error loading JSON from {json_path}: {str(e)}")
        return None


def save_wave_json(wave: WaveSolution, output_path: Path, manifest_hash: Optional[str] = None) -> bool:
    """Save a wave (scalars, grid and both profiles)."""
    payload = wave.summary()
    payload["grid"] = {"half_width": wave.grid.half_width, "nodes_per_half": wave.grid.nodes_per_half,
                       "h": wave.grid.h}
    payload["R"] = wave.R
    payload["V"] = wave.V
    return save_json(payload, output_path, manifest_hash=manifest_hash)


def load_wave_json(json_path: Path) -> Optional[WaveSolution]:
    """Rebuild a WaveSolution saved by ``save_wave_json``.

    Returns:
        The wave, or None if the file is missing, malformed or lacks profiles.
    """
    data = load_json(json_path)
    if data is None:
        return None
    try:
        grid = Grid(half_width=data["grid"]["half_width"], nodes_per_half=data["grid"]["nodes_per_half"])
        return WaveSolution(
            m=data["m"],
            grid=grid,
            R=np.asarray(data["R"], dtype=float),
            V=np.asarray(data["V"], dtype=float),
            sigma=data["sigma"],
            delta=data["delta"],
            eps=data["eps"],
            mu=data["mu"],
            p=data["p"],
            residual=data["residual"],
            iterations=data.get("iterations", 0),
        )
    except (KeyError, TypeError, ValidationError) as e:
        logger.error(f"Invalid wave JSON {json_path}: {str(e)}")
        return None
