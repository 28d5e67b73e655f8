"""Parameters of the singular interaction potential.

Author: FPU Waves maintainers
Created: 2026-10-17
Version: 1.0.0
License: MIT
"""

from pydantic import BaseModel, ConfigDict, Field


class PotentialParams(BaseModel):
    """Exponent of the singular potential Phi(r) = ((1-r)^-m - m r - 1) / (m(m+1)).

    Attributes:
        m: Singularity exponent, strictly greater than 1.

    Example:
        >>> params = PotentialParams(m=2.0)
        >>> params.mu_bar  # 2 / sqrt(6)
    """

    model_config = ConfigDict(frozen=True)

    m: float = Field(..., gt=1.0, description="Singularity exponent (m > 1)")

    @property
    def mu_bar(self) -> float:
        """Limit slope 2 / sqrt(m(m+1)) of the limit ODE solution."""
        return 2.0 / (self.m * (self.m + 1.0)) ** 0.5
