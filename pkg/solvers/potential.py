"""Singular interaction potential and its first two derivatives.

    Phi(r)   = ((1 - r)^-m - m r - 1) / (m (m + 1))
    Phi'(r)  = ((1 - r)^(-m-1) - 1) / (m + 1)
    Phi''(r) = (1 - r)^(-m-2)

Powers of (1 - r) are evaluated as exp(-k log1p(-r)) and the differences
against 1 with expm1, so values near r = 0 and near the singularity keep
their digits. Evaluation at r >= 1 raises instead of returning infinity.

Author: FPU Waves maintainers
Created: 2026-10-17
Version: 1.0.0
License: MIT

Functions:
    eval_potential: Phi, Phi' or Phi'' at r for a given order.
    potential / force / stiffness: order-specific shortcuts.
"""

from typing import Union

import numpy as np

from models.potential import PotentialParams
from utils.errors import PotentialDomainError

ArrayLike = Union[float, np.ndarray]


def _check_domain(r: np.ndarray) -> None:
    if np.any(~np.isfinite(r)):
        raise PotentialDomainError("Potential evaluated at a non-finite distance")
    if np.any(r >= 1.0):
        raise PotentialDomainError(
            f"Potential evaluated at or beyond the singularity: max r = {float(np.max(r)):.17g}"
        )


def eval_potential(params: PotentialParams, r: ArrayLike, order: int = 0) -> ArrayLike:
    """Evaluate Phi (order 0), Phi' (order 1) or Phi'' (order 2) at r.

    Args:
        params: Potential parameters (exponent m).
        r: Distance(s), each strictly below 1.
        order: Derivative order in {0, 1, 2}.

    Returns:
        Value(s) of the requested derivative; a float for scalar input.

    Raises:
        PotentialDomainError: If any r >= 1 or order is not 0, 1 or 2.

    Example:
        >>> eval_potential(PotentialParams(m=2), 0.5, order=1)  # 7/3
    """
    if order not in (0, 1, 2):
        raise PotentialDomainError(f"Invalid derivative order {order!r}; expected 0, 1 or 2")

    scalar = np.ndim(r) == 0
    r_arr = np.asarray(r, dtype=float)
    _check_domain(r_arr)

    m = params.m
    log_gap = np.log1p(-r_arr)  # log(1 - r)

    if order == 0:
        value = (np.expm1(-m * log_gap) - m * r_arr) / (m * (m + 1.0))
    elif order == 1:
        value = np.expm1(-(m + 1.0) * log_gap) / (m + 1.0)
    else:
        value = np.exp(-(m + 2.0) * log_gap)

    return float(value) if scalar else value


def potential(params: PotentialParams, r: ArrayLike) -> ArrayLike:
    """Phi(r)."""
    return eval_potential(params, r, 0)


def force(params: PotentialParams, r: ArrayLike) -> ArrayLike:
    """Phi'(r)."""
    return eval_potential(params, r, 1)


def stiffness(params: PotentialParams, r: ArrayLike) -> ArrayLike:
    """Phi''(r)."""
    return eval_potential(params, r, 2)
