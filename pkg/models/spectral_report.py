"""Data models for the linearized travelling-wave operator.

Author: FPU Waves maintainers
Created: 2026-10-17
Version: 1.0.0
License: MIT

Classes:
    LinearOperatorSpec: A wave, its stiffness profile Q and a weight a.
    SpectralReport: Essential-spectrum curves and near-kernel singular values.
    JordanReport: Check of the generalized kernel chain.
    VerdictStability: Kernel counts across weights and domain widths.
"""

from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from models.wave_solution import Grid, WaveSolution


class LinearOperatorSpec(BaseModel):
    """Linearization of the travelling-wave equations about a computed wave.

    Attributes:
        wave: The wave (R, V, sigma).
        a: Exponential weight, 0 <= a < a_c.
        Q: Phi''(R) on the grid; even, largest at 0 where it equals eps^-(m+2).
        c: Wave speed sqrt(sigma).
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    wave: WaveSolution
    a: float = Field(..., ge=0.0, description="Exponential weight")
    Q: np.ndarray = Field(..., description="Phi''(R) samples")
    c: float = Field(..., gt=1.0, description="Wave speed")

    @property
    def grid(self) -> Grid:
        return self.wave.grid

    @property
    def sigma(self) -> float:
        return self.wave.sigma


class SpectralReport(BaseModel):
    """Essential spectrum and near-kernel data for one (wave, a) pair.

    Curve samples are filled by ``essential_spectrum``; singular values and
    kernel data by ``kernel_scan``. Singular values are ascending and exclude
    boundary modes (singular vectors concentrated in the edge strips of the
    truncated domain), whose count is reported separately. ``scale`` is the
    median of the reported singular values.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    a: float
    c: float
    a_c: float
    b_star: float

    k: Optional[np.ndarray] = None
    re_P_plus: Optional[np.ndarray] = None
    im_P_plus: Optional[np.ndarray] = None
    re_P_minus: Optional[np.ndarray] = None
    im_P_minus: Optional[np.ndarray] = None
    max_real_part: Optional[float] = None

    singular_values: List[float] = Field(default_factory=list)
    boundary_modes: int = 0
    scale: Optional[float] = None
    kernel_count: Optional[int] = None
    gap_ratio: Optional[float] = None
    inconclusive: bool = False
    kernel_vector: Optional[np.ndarray] = None
    kernel_correlation: Optional[float] = None

    even_min_sv: Optional[float] = None
    odd_min_sv: Optional[float] = None
    odd_second_sv: Optional[float] = None
    even_invertible: Optional[bool] = None

    def curve_columns(self) -> Dict[str, np.ndarray]:
        """Columns of the spectrum CSV."""
        if self.k is None:
            return {}
        return {
            "k": self.k,
            "reP_plus": self.re_P_plus,
            "imP_plus": self.im_P_plus,
            "reP_minus": self.re_P_minus,
            "imP_minus": self.im_P_minus,
        }

    def summary(self) -> Dict[str, Any]:
        return {
            "a": self.a,
            "c": self.c,
            "a_c": self.a_c,
            "b_star": self.b_star,
            "max_real_part": self.max_real_part,
            "singular_values": list(self.singular_values),
            "boundary_modes": self.boundary_modes,
            "median_sv": self.scale,
            "kernel_count": self.kernel_count,
            "gap_ratio": self.gap_ratio,
            "inconclusive": self.inconclusive,
            "kernel_correlation": self.kernel_correlation,
            "even_subspace_min_sv": self.even_min_sv,
            "odd_subspace_min_sv": self.odd_min_sv,
            "odd_subspace_second_sv": self.odd_second_sv,
            "even_invertible": self.even_invertible,
        }


class JordanReport(BaseModel):
    """L(S2, W2) against (0, -(sigma'/sigma) W1) for S2 = dR/d delta, W2 = dV/d delta."""

    delta: float
    sigma_prime: float
    first_row_norm: float = Field(..., ge=0.0, description="Relative norm of the first row")
    second_row_mismatch: float = Field(..., ge=0.0, description="Relative mismatch of the second row")


class VerdictStability(BaseModel):
    """Kernel counts for several weights and for a widened domain."""

    delta: float
    fractions: List[float]
    counts: List[int]
    widened_half_width: float
    widened_count: int
    stable: bool
