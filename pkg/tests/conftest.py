"""Pytest configuration and fixtures for the FPU wave tests.

Waves are solved once per session on a small grid (X = 4, h = 1/128) so the
whole suite stays fast; tolerances in the tests are set for that grid.

Author: FPU Waves maintainers
Created: 2026-10-17
Version: 1.0.0
License: MIT
"""

import pytest

from models.potential import PotentialParams
from models.run_config import RunConfig
from models.wave_solution import Grid
from solvers.limit_profiles import solve_limit_ode
from solvers.linearization import build_operator_spec, kernel_scan
from solvers.wave_solver import solve_wave
from workflows.sweep_workflow import DeltaSweepWorkflow


@pytest.fixture(scope="session")
def params():
    """Quadratic singularity m = 2."""
    return PotentialParams(m=2.0)


@pytest.fixture(scope="session")
def grid():
    """Small test grid: X = 4, K = 64 (h = 1/128)."""
    return Grid(half_width=4, nodes_per_half=64)


@pytest.fixture(scope="session")
def ode():
    """Limit ODE table for m = 2 on [0, 50] with step 1e-3.

    For m = 2 the solution is known in closed form,
    S(x) = sqrt(1 + mu_bar^2 x^2) - 1, so kappa_bar = 1.
    """
    return solve_limit_ode(2.0, 50.0, 1e-3)


@pytest.fixture(scope="session")
def wave_02(params, grid):
    """Wave at delta = 0.2."""
    return solve_wave(params, 0.2, grid)


@pytest.fixture(scope="session")
def wave_01(params, grid):
    """Wave at delta = 0.1."""
    return solve_wave(params, 0.1, grid)


@pytest.fixture(scope="session")
def scan_02(wave_02, params):
    """Kernel scan of the delta = 0.2 wave at a = a_c / 2, with parity restrictions."""
    return kernel_scan(build_operator_spec(wave_02, params, a_fraction=0.5))


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: runs on the default grid X = 6, h = 1/512 (deselect with -m 'not slow')")


@pytest.fixture(scope="session")
def default_sweep():
    """Sweep over delta in {0.2, 0.1, 0.05, 0.025} on the default grid X = 6, h = 1/512."""
    run_config = RunConfig(m=2.0, deltas=[0.2, 0.1, 0.05, 0.025], half_width=6, nodes_per_half=256, workers=4)
    workflow = DeltaSweepWorkflow(run_config)
    return workflow, workflow.process_all()
