"""Data models for computed solitary waves.

Author: FPU Waves maintainers
Created: 2026-10-17
Version: 1.0.0
License: MIT

Classes:
    Grid: Uniform symmetric grid with exact half and unit shifts.
    WaveSolution: Converged distance/velocity profiles and their scalars.
    HatComparison: Errors against the high-energy approximation.
    NondegeneracyRow: One delta of the non-degeneracy table.
"""

from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


class Grid(BaseModel):
    """Uniform grid x_i = (i - c) h on [-X, X] with h = 1/(2K).

    Shifts by 1/2 and 1 are exact index offsets of K and 2K nodes.

    Attributes:
        half_width: X, a multiple of 1/2 and at least 4.
        nodes_per_half: K >= 32.

    Example:
        >>> grid = Grid(half_width=4, nodes_per_half=64)
        >>> grid.n_nodes
        1025
    """

    model_config = ConfigDict(frozen=True)

    half_width: float = Field(..., ge=4.0, description="Half width X of the domain")
    nodes_per_half: int = Field(..., ge=32, description="Nodes per half unit K (h = 1/(2K))")

    @model_validator(mode="after")
    def _check_alignment(self) -> "Grid":
        if abs(2.0 * self.half_width - round(2.0 * self.half_width)) > 1e-12:
            raise ValueError(f"half_width must be a multiple of 1/2, got {self.half_width}")
        return self

    @property
    def h(self) -> float:
        return 1.0 / (2.0 * self.nodes_per_half)

    @property
    def center(self) -> int:
        """Index of x = 0."""
        return int(round(2.0 * self.half_width)) * self.nodes_per_half

    @property
    def n_nodes(self) -> int:
        return 2 * self.center + 1

    @property
    def half_shift(self) -> int:
        return self.nodes_per_half

    @property
    def unit_shift(self) -> int:
        return 2 * self.nodes_per_half

    @property
    def x(self) -> np.ndarray:
        """Node coordinates, exactly antisymmetric about the center."""
        return (np.arange(self.n_nodes) - self.center) * self.h

    def widened(self, extra: float) -> "Grid":
        """Same spacing on [-(X + extra), X + extra]."""
        return Grid(half_width=self.half_width + extra, nodes_per_half=self.nodes_per_half)

    def refined(self) -> "Grid":
        """Same extent with half the spacing."""
        return Grid(half_width=self.half_width, nodes_per_half=2 * self.nodes_per_half)

    def describe(self) -> Dict[str, float]:
        return {"X": self.half_width, "h": self.h}


class WaveSolution(BaseModel):
    """Solitary wave (R, V, sigma) at parameter delta, normalized by ||V||_2 = 1 - delta.

    Attributes:
        m: Potential exponent.
        grid: Spatial grid.
        R: Distance profile R = A V.
        V: Velocity profile.
        sigma: Wave-speed parameter (squared speed).
        delta: Norm defect, ||V||_2 = 1 - delta.
        eps: 1 - R(0).
        mu: sqrt(sigma eps^(m+2)).
        p: Potential energy, integral of Phi(R).
        residual: ||sigma V - A Phi'(A V)||_2 / sigma.
        iterations: Fixed-point iterations used.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    m: float = Field(..., gt=1.0)
    grid: Grid
    R: np.ndarray = Field(..., description="Distance profile samples")
    V: np.ndarray = Field(..., description="Velocity profile samples")
    sigma: float = Field(..., gt=0.0, description="Wave-speed parameter")
    delta: float = Field(..., gt=0.0, lt=1.0, description="Norm defect")
    eps: float = Field(..., description="1 - R(0)")
    mu: float = Field(..., description="sqrt(sigma eps^(m+2))")
    p: float = Field(..., description="Potential energy")
    residual: float = Field(..., ge=0.0, description="Relative fixed-point residual")
    iterations: int = Field(default=0, ge=0)

    @property
    def speed(self) -> float:
        return float(np.sqrt(self.sigma))

    def summary(self) -> Dict[str, Any]:
        """Scalar JSON sidecar content."""
        return {
            "m": self.m,
            "delta": self.delta,
            "sigma": self.sigma,
            "eps": self.eps,
            "mu": self.mu,
            "p": self.p,
            "residual": self.residual,
            "iterations": self.iterations,
            "grid": self.grid.describe(),
        }


class HatComparison(BaseModel):
    """Distance of a computed wave from the high-energy approximation at its eps."""

    delta: float
    eps: float
    mu_hat: float
    sigma_hat: float
    err_R_inf: float = Field(..., ge=0.0)
    err_R_l1: float = Field(..., ge=0.0)
    err_R_l2: float = Field(..., ge=0.0)
    err_V_inf: float = Field(..., ge=0.0)
    err_V_l1: float = Field(..., ge=0.0)
    err_V_l2: float = Field(..., ge=0.0)
    err_mu_scaled: float = Field(..., ge=0.0, description="eps^-1 |mu - mu_hat|")
    err_sigma_scaled: float = Field(..., ge=0.0, description="eps^m |sigma - sigma_hat|")


class NondegeneracyRow(BaseModel):
    """Finite-difference derivatives of sigma and H in delta at one sweep point.

    Error estimates are half the gap between forward and backward differences
    and are only available at interior points.
    """

    delta: float
    sigma: float
    H: float
    dsigma_ddelta: float
    dH_ddelta: float
    dsigma_err: Optional[float] = None
    dH_err: Optional[float] = None
    interior: bool = False
    dH_significant: Optional[bool] = None


class NondegeneracyTable(BaseModel):
    """Rows ordered by increasing delta."""

    rows: List[NondegeneracyRow] = Field(default_factory=list)
    sigma_monotone: bool = Field(..., description="sigma strictly decreasing in delta")

    def interior_rows(self) -> List[NondegeneracyRow]:
        return [row for row in self.rows if row.interior]
