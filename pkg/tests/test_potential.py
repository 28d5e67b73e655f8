"""Tests for the singular potential and its derivatives.

Author: FPU Waves maintainers
Created: 2026-10-17
Version: 1.0.0
License: MIT
"""

import numpy as np
import pytest
from pydantic import ValidationError

from models.potential import PotentialParams
from solvers.potential import eval_potential, force, potential, stiffness
from utils.errors import PotentialDomainError


def test_normalization_at_zero(params):
    """Phi(0) = Phi'(0) = 0 and Phi''(0) = 1."""
    assert potential(params, 0.0) == 0.0
    assert force(params, 0.0) == 0.0
    assert stiffness(params, 0.0) == pytest.approx(1.0, abs=1e-15)


def test_known_values_m2(params):
    """Closed-form values at r = 1/2 for m = 2."""
    assert potential(params, 0.5) == pytest.approx(1.0 / 3.0, rel=1e-14)
    assert force(params, 0.5) == pytest.approx(7.0 / 3.0, rel=1e-14)
    assert stiffness(params, 0.5) == pytest.approx(16.0, rel=1e-14)


def test_small_distance_accuracy(params):
    """Phi keeps full relative accuracy near r = 0."""
    r = 1e-3
    series = sum((k + 1) * r ** k for k in range(2, 12)) / 6.0
    assert potential(params, r) == pytest.approx(series, rel=1e-10)


def test_derivatives_consistent(params):
    """Central differences of Phi and Phi' match Phi' and Phi''."""
    r = np.linspace(-2.0, 0.9, 30)
    h = 1e-5
    dphi = (potential(params, r + h) - potential(params, r - h)) / (2 * h)
    ddphi = (force(params, r + h) - force(params, r - h)) / (2 * h)
    np.testing.assert_allclose(dphi, force(params, r), rtol=1e-6, atol=1e-9)
    np.testing.assert_allclose(ddphi, stiffness(params, r), rtol=1e-6, atol=1e-9)


def test_scalar_and_array_shapes(params):
    """Scalars give floats, arrays keep their shape."""
    assert isinstance(force(params, 0.1), float)
    values = force(params, np.zeros((2, 3)))
    assert values.shape == (2, 3)


def test_stretched_bonds_are_finite(params):
    """Large negative distances (stretched bonds) are allowed."""
    assert np.isfinite(potential(params, -50.0))
    assert force(params, -50.0) < 0.0


@pytest.mark.parametrize("r", [1.0, 1.5, np.nan])
def test_domain_violation(params, r):
    """Distances at or beyond the singularity are rejected."""
    with pytest.raises(PotentialDomainError):
        potential(params, r)


def test_domain_violation_in_array(params):
    """One bad entry rejects the whole array."""
    with pytest.raises(PotentialDomainError):
        stiffness(params, np.array([0.0, 0.5, 1.0]))


def test_invalid_order(params):
    """Only orders 0, 1 and 2 exist."""
    with pytest.raises(PotentialDomainError):
        eval_potential(params, 0.1, order=3)


def test_params_validation():
    """m must exceed 1."""
    with pytest.raises(ValidationError):
        PotentialParams(m=1.0)
    assert PotentialParams(m=2.0).mu_bar == pytest.approx(2.0 / np.sqrt(6.0), rel=1e-15)
