"""Data models for the rescaled kernel analysis.

Author: FPU Waves maintainers
Created: 2026-10-17
Version: 1.0.0
License: MIT

Classes:
    TPair: Even and odd solutions of T'' = -2 P T.
    RescaledKernel: A kernel function on the rescaled grid with its fits.
    ErrorTermReport: Residuals of the asymptotic ODE replacement.
    Lemma4Report: Empirical Green's function bounds across delta.
"""

from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field


class TPair(BaseModel):
    """Solutions T_e (even) and T_o (odd) of T'' = -2 P T on a rescaled grid.

    Normalized so that T_e' -> 1 and T_o -> 1 as xt -> +inf.

    Attributes:
        xt: Sample points.
        Te, To, dTe, dTo: Values and derivatives at xt.
        limit_slope: Measured limit slope of the unnormalized even shot.
        wronskian_slope: The slope implied by the Wronskian, -m/2.
        wronskian: Te To' - Te' To after normalization (mean over samples).
        wronskian_spread: max - min of the Wronskian over the samples.
        even_affine_bound: sup |Te' xt - Te| over xt >= 0.
        even_slope_bound: sup |(Te' - 1) xt^m| over xt >= 1.
        odd_slope_bound: sup |To' xt^m| over xt >= 1.
        odd_tail: To(xt_max) - 1.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    xt: np.ndarray
    Te: np.ndarray
    To: np.ndarray
    dTe: np.ndarray
    dTo: np.ndarray
    limit_slope: float
    wronskian_slope: float
    wronskian: float
    wronskian_spread: float = Field(..., ge=0.0)
    even_affine_bound: float
    even_slope_bound: float
    odd_slope_bound: float
    odd_tail: float


class RescaledKernel(BaseModel):
    """Kernel function S on the rescaled variable xt = x / ell, with its limit fit.

    Attributes:
        delta: Norm defect of the underlying wave.
        ell: Rescaling length.
        ell_mode: "mu" (ell = mu_delta / mu_bar) or "delta" (ell = delta).
        a: Exponential weight of the physical problem.
        xt: Rescaled nodes (spacing h / ell).
        St, Gt: Normalized kernel function and its weighted form e^{ell a xt} St.
        Qt, Pt, Zt: Rescaled stiffness, its limit and (Qt - Pt) / ell^(m+2).
        Te, To: Limit ODE solutions at xt.
        c_e, c_o: Fit coefficients St(0)/Te(0) and St'(0)/To'(0).
        sup_residual: sup over |xt| <= 1/(2 ell) of |St - c_e Te - c_o To|.
        endpoint_residual: The same residual at the interval endpoints.
        fp_residual: Relative residual of Gt = H * Delta(Qt Gt).
        Z_inf: sup |Zt| at this ell.
        Z_inf_delta: sup |Zt| with ell = delta.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    delta: float
    ell: float = Field(..., gt=0.0)
    ell_mode: str
    a: float
    xt: np.ndarray
    St: np.ndarray
    Gt: np.ndarray
    Qt: np.ndarray
    Pt: np.ndarray
    Zt: np.ndarray
    Te: np.ndarray
    To: np.ndarray
    c_e: float
    c_o: float
    sup_residual: float
    endpoint_residual: float
    fp_residual: float
    Z_inf: float
    Z_inf_delta: float

    def columns(self) -> Dict[str, np.ndarray]:
        """Columns of the rescaled CSV."""
        return {"xt": self.xt, "St": self.St, "Te": self.Te, "To": self.To, "Pt": self.Pt, "Zt": self.Zt}

    def summary(self) -> Dict[str, Any]:
        return {
            "delta": self.delta,
            "ell": self.ell,
            "ell_mode": self.ell_mode,
            "a": self.a,
            "c_e": self.c_e,
            "c_o": self.c_o,
            "sup_residual_interval": self.sup_residual,
            "endpoint_residual": self.endpoint_residual,
            "fp_residual": self.fp_residual,
            "Z_inf": self.Z_inf,
            "Z_inf_delta": self.Z_inf_delta,
        }


class ErrorTermReport(BaseModel):
    """Pointwise and weighted sizes of E0 = St'' + 2 Pt St and E+ = St''(xt + 1/ell) - Pt St."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    delta: float
    sup_E0: float
    sup_Eplus: float
    int0: float = Field(..., description="Integral of |E0| + |E+| over the interval")
    int1: float = Field(..., description="Integral of |xt| (|E0| + |E+|) over the interval")
    E0: Optional[np.ndarray] = None
    Eplus: Optional[np.ndarray] = None


class Lemma4Report(BaseModel):
    """Empirical constants of the Green's function bounds, maximized over trials.

    ``constants`` maps each inequality name to one value per delta (in the
    order of ``deltas``); ``growth`` is the largest ratio against the value
    at the largest delta.
    """

    deltas: List[float]
    trials: int
    a: float
    constants: Dict[str, List[float]]
    growth: Dict[str, float]
    commutation_gap: List[float]
    passed: bool
