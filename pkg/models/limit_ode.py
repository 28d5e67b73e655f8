"""Data models for the limit ODE and the high-energy approximations.

Author: FPU Waves maintainers
Created: 2026-10-17
Version: 1.0.0
License: MIT

Classes:
    KappaEstimate: The two evaluation routes of the constant kappa_bar.
    LimitOde: Tabulated solution of the limit initial-value problem.
    AsymptoticProfiles: Scalars of the approximate wave at a given eps.
    InterfaceJumps: Branch mismatches of the piecewise approximations.
"""

from typing import Any, Dict, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr


class KappaEstimate(BaseModel):
    """kappa_bar from quadrature and from the extrapolated S'(X) X - S(X).

    Attributes:
        value: Accepted estimate (quadrature route with tail correction).
        quadrature: Composite Simpson value of the integral of xbar * S'' up to xbar_max.
        by_parts: Limit of S'(X) X - S(X) extrapolated from the table.
        tail: Analytic remainder beyond xbar_max.
        route_gap: |value - by_parts|.
    """

    value: float = Field(..., description="kappa_bar estimate")
    quadrature: float = Field(..., description="Partial integral by Simpson quadrature")
    by_parts: float = Field(..., description="Extrapolated limit of S'(X) X - S(X)")
    tail: float = Field(..., description="Analytic tail beyond the table end")
    route_gap: float = Field(..., ge=0.0, description="Disagreement of the two routes")


class LimitOde(BaseModel):
    """Fixed-step solution of S'' = (2/(m+1)) (1+S)^-(m+1), S(0) = S'(0) = 0.

    Samples are stored on the uniform grid xbar = 0, step, ..., xbar_max; the
    profile is extended evenly (S) and oddly (S') to negative arguments by the
    evaluators in ``solvers.limit_profiles``.

    Attributes:
        m: Potential exponent.
        xbar_max: Extent of the table.
        step: Integration step actually used (xbar_max / number of steps).
        xbar, S, dS: Tabulated samples.
        mu_bar: 2 / sqrt(m(m+1)), the limit of S'.
        kappa_bar: lim (S'(X) X - S(X)).
        energy_residual: max |S'^2 - mu_bar^2 + 4/(m(m+1)) (1+S)^-m| over the table.
        richardson_error: Step-doubling error estimate for S (None if skipped).
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    m: float = Field(..., gt=1.0, description="Potential exponent")
    xbar_max: float = Field(..., gt=0.0, description="Table extent")
    step: float = Field(..., gt=0.0, description="Integration step")
    xbar: np.ndarray = Field(..., description="Sample abscissae")
    S: np.ndarray = Field(..., description="S_bar samples")
    dS: np.ndarray = Field(..., description="S_bar' samples")
    mu_bar: float = Field(..., description="Limit slope")
    kappa_bar: float = Field(..., description="Affine offset constant")
    kappa: Optional[KappaEstimate] = Field(default=None, description="Route breakdown of kappa_bar")
    energy_residual: float = Field(..., ge=0.0, description="Energy identity residual")
    richardson_error: Optional[float] = Field(default=None, description="Step-doubling estimate")

    _splines: Dict[str, Any] = PrivateAttr(default_factory=dict)

    def summary(self) -> Dict[str, float]:
        """Scalar summary used for JSON sidecars."""
        return {
            "m": self.m,
            "xbar_max": self.xbar_max,
            "step": self.step,
            "mu_bar": self.mu_bar,
            "kappa_bar": self.kappa_bar,
            "kappa_quadrature": self.kappa.quadrature if self.kappa else None,
            "kappa_by_parts": self.kappa.by_parts if self.kappa else None,
            "kappa_tail": self.kappa.tail if self.kappa else None,
            "energy_residual": self.energy_residual,
            "richardson_error": self.richardson_error,
        }


class AsymptoticProfiles(BaseModel):
    """Scalars of the high-energy approximation at a given eps.

    Attributes:
        m: Potential exponent.
        eps: Small parameter in (0, 1).
        mu_hat: mu_bar eps / (1 + eps (kappa_bar - 1)).
        sigma_hat: eps^(-m-2) mu_hat^2.
    """

    model_config = ConfigDict(frozen=True)

    m: float = Field(..., gt=1.0)
    eps: float = Field(..., gt=0.0, lt=1.0)
    mu_hat: float = Field(..., gt=0.0)
    sigma_hat: float = Field(..., gt=0.0)


class InterfaceJumps(BaseModel):
    """Absolute branch mismatches of R_hat and V_hat at their interfaces."""

    eps: float
    jump_R_half: float = Field(..., description="R_hat mismatch at |x| = 1/2")
    jump_R_three_halves: float = Field(..., description="R_hat mismatch at |x| = 3/2")
    jump_V_one: float = Field(..., description="V_hat mismatch at |x| = 1")
