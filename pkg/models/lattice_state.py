"""Data models for lattice simulations of the FPU chain.

Author: FPU Waves maintainers
Created: 2026-10-17
Version: 1.0.0
License: MIT

Classes:
    LatticeState: Distances, velocities and time of a finite chain.
    TrajectorySummary: Conservation and shape diagnostics of a run.
"""

from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


class LatticeState(BaseModel):
    """State of a chain of J particles with free ends.

    Attributes:
        r: Distances r_j = u_{j+1} - u_j, length J - 1.
        v: Velocities, length J.
        t: Time.
        energy: sum of v_j^2 / 2 + Phi(r_j).
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    r: np.ndarray
    v: np.ndarray
    t: float = 0.0
    energy: float = 0.0

    @model_validator(mode="after")
    def _check_lengths(self) -> "LatticeState":
        if self.r.shape[0] + 1 != self.v.shape[0]:
            raise ValueError(f"Expected len(r) = len(v) - 1, got {self.r.shape[0]} and {self.v.shape[0]}")
        return self

    @property
    def J(self) -> int:
        return int(self.v.shape[0])

    @property
    def momentum(self) -> float:
        return float(np.sum(self.v))

    def snapshot(self) -> Dict[str, np.ndarray]:
        """Columns of a trajectory snapshot CSV (v is taken at the bond's left particle)."""
        return {"j": np.arange(self.r.shape[0]), "r": self.r, "v": self.v[:-1]}


class TrajectorySummary(BaseModel):
    """Diagnostics of one lattice run.

    Attributes:
        T: Simulated horizon.
        dt: Time step actually used.
        steps: Number of steps.
        energy_drift: max |E(t) - E(0)| / E(0) over recorded times.
        momentum_drift: max |P(t) - P(0)| over recorded times.
        max_distance: Largest r_j seen.
        boundary_force: Largest |Phi'(r)| on the end bonds.
        shape_error: Relative sup distance to the shifted profile (if fitted).
        fitted_shift: Optimal shift s.
        fitted_speed: s / T.
        sigma_ref: sigma of the wave the run started from.
        times, energies, momenta: Recorded histories.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    T: float = Field(..., ge=0.0)
    dt: float = Field(..., gt=0.0)
    steps: int = Field(..., ge=0)
    energy_drift: float
    momentum_drift: float
    max_distance: float
    boundary_force: float
    shape_error: Optional[float] = None
    fitted_shift: Optional[float] = None
    fitted_speed: Optional[float] = None
    sigma_ref: Optional[float] = None
    times: List[float] = Field(default_factory=list)
    energies: List[float] = Field(default_factory=list)
    momenta: List[float] = Field(default_factory=list)
    snapshots: List[LatticeState] = Field(default_factory=list)

    def summary(self) -> Dict[str, Any]:
        return {
            "T": self.T,
            "dt": self.dt,
            "steps": self.steps,
            "energy_drift": self.energy_drift,
            "momentum_drift": self.momentum_drift,
            "max_distance": self.max_distance,
            "boundary_force": self.boundary_force,
            "shape_error": self.shape_error,
            "fitted_speed": self.fitted_speed,
            "sigma_ref": self.sigma_ref,
            "speed_ref": None if self.sigma_ref is None else float(np.sqrt(self.sigma_ref)),
        }

    def history_columns(self) -> Dict[str, np.ndarray]:
        return {
            "t": np.asarray(self.times),
            "energy": np.asarray(self.energies),
            "momentum": np.asarray(self.momenta),
        }
