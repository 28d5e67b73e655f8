"""Resolved run configuration and its manifest.

A ``RunConfig`` is built from ``utils.config.Config`` defaults, then a
key = value configuration file, then command-line flags, each layer
overriding the previous one. Every artifact written by a run carries the
SHA-256 of the canonical JSON of the numerics-relevant fields.

Author: FPU Waves maintainers
Created: 2026-10-17
Version: 1.0.0
License: MIT
"""

import hashlib
import json
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from models.potential import PotentialParams
from models.wave_solution import Grid
from utils.config import config

ARTIFACT_VERSION = "1.0.0"

# Fields that do not change any computed number and stay out of the hash.
UNHASHED_FIELDS = ("output_dir", "workers")


class RunConfig(BaseModel):
    """Configuration of one CLI invocation.

    Attributes:
        m: Potential exponent.
        deltas: Norm defects, each in (0, 1/2).
        half_width: Grid half width X.
        nodes_per_half: K, with h = 1/(2K).
        tol: Fixed-point tolerance.
        max_iter: Fixed-point iteration cap.
        a_policy: "fraction" (a = a_value * a_c) or "absolute" (a = a_value).
        a_value: Weight or weight fraction.
        ell_mode: Rescaling length, "mu" or "delta".
        xbar_max: Limit ODE table extent.
        ode_step: Limit ODE step.
        seed: Seed of the Green's function test functions.
        trials: Random test functions per delta.
        transits: Lattice horizon in wave transits (T = transits / sqrt(sigma)).
        dt_fraction: Lattice step as a fraction of dt_max.
        output_dir: Output directory; None means the output root.
        workers: Thread pool size for sweeps (1 runs sequentially).
    """

    model_config = ConfigDict(extra="forbid")

    m: float = Field(default=config.DEFAULT_M, gt=1.0, description="Potential exponent")
    deltas: List[float] = Field(default_factory=lambda: list(config.DEFAULT_DELTAS), min_length=1)
    half_width: float = Field(default=config.DEFAULT_HALF_WIDTH, ge=4.0)
    nodes_per_half: int = Field(default=config.DEFAULT_NODES_PER_HALF, ge=32)
    tol: float = Field(default=config.DEFAULT_TOL, gt=0.0)
    max_iter: int = Field(default=config.DEFAULT_MAX_ITER, ge=1)
    a_policy: Literal["fraction", "absolute"] = "fraction"
    a_value: float = Field(default=config.DEFAULT_A_FRACTION, gt=0.0)
    ell_mode: Literal["mu", "delta"] = "mu"
    xbar_max: float = Field(default=config.DEFAULT_XBAR_MAX, gt=0.0)
    ode_step: float = Field(default=config.DEFAULT_ODE_STEP, gt=0.0)
    seed: int = Field(default=config.DEFAULT_SEED, ge=0)
    trials: int = Field(default=20, ge=1)
    transits: float = Field(default=5.0, gt=0.0)
    dt_fraction: float = Field(default=0.1, gt=0.0, le=1.0)
    output_dir: Optional[str] = Field(default=None, description="Output directory (relative to FPU_OUTPUT_ROOT)")
    workers: int = Field(default=config.MAX_WORKERS if config.ENABLE_PARALLEL else 1, ge=1)

    @field_validator("deltas")
    @classmethod
    def _check_deltas(cls, values: List[float]) -> List[float]:
        for delta in values:
            if not 0.0 < delta < 0.5:
                raise ValueError(f"delta must lie in (0, 1/2), got {delta}")
        return values

    @field_validator("half_width")
    @classmethod
    def _check_half_width(cls, value: float) -> float:
        if abs(2.0 * value - round(2.0 * value)) > 1e-12:
            raise ValueError(f"half_width must be a multiple of 1/2, got {value}")
        return value

    @model_validator(mode="after")
    def _check_fraction(self) -> "RunConfig":
        if self.a_policy == "fraction" and not self.a_value < 1.0:
            raise ValueError(f"a_value must be below 1 under the fraction policy, got {self.a_value}")
        return self

    @property
    def grid(self) -> Grid:
        return Grid(half_width=self.half_width, nodes_per_half=self.nodes_per_half)

    @property
    def params(self) -> PotentialParams:
        return PotentialParams(m=self.m)

    @property
    def output_path(self) -> Path:
        return config.output_dir(self.output_dir)

    def resolve_weight(self, a_c: float) -> float:
        """The weight a under the configured policy for critical weight a_c."""
        return self.a_value * a_c if self.a_policy == "fraction" else self.a_value

    def resolved(self) -> Dict[str, Any]:
        """All fields with plain JSON types."""
        return self.model_dump(mode="json")

    @property
    def manifest_hash(self) -> str:
        hashed = {k: v for k, v in self.resolved().items() if k not in UNHASHED_FIELDS}
        hashed["version"] = ARTIFACT_VERSION
        canonical = json.dumps(hashed, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    def manifest(self, command: str) -> Dict[str, Any]:
        """Manifest written next to every artifact set."""
        return {
            "command": command,
            "version": ARTIFACT_VERSION,
            "config": self.resolved(),
            "manifest_hash": self.manifest_hash,
        }
