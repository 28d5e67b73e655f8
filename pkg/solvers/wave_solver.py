"""Solitary waves of the singular FPU chain by normalized fixed-point iteration.

A travelling wave with distance profile R and velocity profile V solves

    R = A V,   sigma V = A Phi'(A V),

where A is the average over the unit box [x - 1/2, x + 1/2]. With the norm
fixed at ||V||_2 = 1 - delta the map

    V -> (1 - delta) T(V) / ||T(V)||_2,   T(V) = A Phi'(A V)

increases the potential energy p = integral of Phi(A V) at every step (Phi
is convex and A symmetric), and its fixed points are waves with sigma as the
emergent multiplier.

Author: FPU Waves maintainers
Created: 2026-10-17
Version: 1.0.0
License: MIT

Functions:
    box_average: R = A V on the grid.
    solve_wave: The improvement iteration for one delta.
    wave_derivatives: (R', V') by fourth-order differences.
    second_order_residual: Residual of R'' = (1/sigma) Delta_1 Phi'(R).
    fpu_energy: Lattice energy of the travelling wave.
    compare_with_hat_profiles: Errors against the high-energy approximation.
    nondegeneracy: Finite-difference derivatives of sigma and H in delta.
    limit_profiles: The delta -> 0 limits (indicator and tent map).
"""

import logging
import math
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import cumulative_trapezoid, trapezoid

from models.limit_ode import LimitOde
from models.potential import PotentialParams
from models.wave_solution import (
    Grid,
    HatComparison,
    NondegeneracyRow,
    NondegeneracyTable,
    WaveSolution,
)
from solvers.limit_profiles import eval_hat_profiles, hat_scalars
from solvers.potential import force, potential
from solvers.stencils import discrete_norm, first_derivative, second_derivative, shift
from utils.errors import (
    ConfigurationError,
    ConvergenceFailure,
    TruncationError,
    UnimodalityLost,
)

logger = logging.getLogger(__name__)

BOUNDARY_DECAY_LIMIT = 1e-14
TRUNCATION_LIMIT = 1e-6
ENERGY_DECREASE_TOLERANCE = 1e-12
UNIMODALITY_TOLERANCE = 1e-10


def box_average(V: np.ndarray, grid: Grid, check_decay: bool = True) -> np.ndarray:
    """(A V)(x_i) = integral of V over [x_i - 1/2, x_i + 1/2].

    V is extended by zero beyond the grid; the integral is a difference of
    trapezoid prefix sums K nodes apart on either side, so the discrete A is
    symmetric and satisfies max |A V| <= ||V||_2.

    Args:
        V: Samples on ``grid``.
        grid: Uniform grid.
        check_decay: Warn when V has not decayed at the boundary.

    Returns:
        Samples of A V.
    """
    V = np.asarray(V, dtype=float)
    if V.shape != (grid.n_nodes,):
        raise ConfigurationError(f"Expected {grid.n_nodes} samples, got {V.shape}")

    if check_decay:
        edge = max(abs(V[0]), abs(V[-1]))
        if edge > BOUNDARY_DECAY_LIMIT:
            logger.warning("box_average input has not decayed at the boundary: |V| = %.3e", edge)

    K = grid.half_shift
    padded = np.concatenate((np.zeros(K), V, np.zeros(K)))
    prefix = cumulative_trapezoid(padded, dx=grid.h, initial=0.0)
    return prefix[2 * K:] - prefix[:grid.n_nodes]


def _seed_profile(grid: Grid, delta: float) -> np.ndarray:
    x = grid.x
    V0 = 0.5 * (1.0 - np.tanh((np.abs(x) - 0.5) / (4.0 * grid.h)))
    return (1.0 - delta) * V0 / discrete_norm(V0, grid.h)


def _check_unimodal(V: np.ndarray, grid: Grid, iteration: int) -> None:
    right = V[grid.center:]
    scale = max(float(np.max(right)), 1e-300)
    rise = float(np.max(np.diff(right), initial=0.0))
    if rise > UNIMODALITY_TOLERANCE * scale or float(np.min(V)) < -UNIMODALITY_TOLERANCE * scale:
        raise UnimodalityLost(
            f"Iterate {iteration} is not unimodal (rise {rise:.3e}); refine the grid"
        )


def _potential_energy(params: PotentialParams, R: np.ndarray, h: float) -> float:
    return float(trapezoid(potential(params, R), dx=h))


def solve_wave(params: PotentialParams, delta: float, grid: Grid,
               tol: float = 1e-8, max_iter: int = 20000) -> WaveSolution:
    """Compute the solitary wave with ||V||_2 = 1 - delta.

    Iterates V_{n+1} = T(V_n) / sigma_n with sigma_n = ||T(V_n)||_2 / (1 - delta)
    from a smoothed indicator of [-1/2, 1/2]. Each iterate is symmetrized
    and checked for unimodality; the potential energy must not decrease.

    Args:
        params: Potential parameters.
        delta: Norm defect in (0, 1/2).
        grid: Spatial grid.
        tol: Bound on both the relative residual and the iterate distance.
        max_iter: Iteration cap.

    Returns:
        Converged WaveSolution.

    Raises:
        ConfigurationError: If delta or tol is out of range.
        ConvergenceFailure: If max_iter is exceeded or p decreases.
        UnimodalityLost: If an iterate stops being unimodal.
        TruncationError: If the wave has not decayed at the grid boundary.
    """
    if not 0.0 < delta < 0.5:
        raise ConfigurationError(f"delta must lie in (0, 1/2), got {delta}")
    if tol <= 0.0 or max_iter < 1:
        raise ConfigurationError(f"tol must be positive and max_iter >= 1, got {tol}, {max_iter}")

    h = grid.h
    target = 1.0 - delta
    logger.info("Solving wave: m=%s, delta=%s, X=%s, h=%.3e", params.m, delta, grid.half_width, h)

    V = _seed_profile(grid, delta)
    R = box_average(V, grid, check_decay=False)
    T = box_average(force(params, R), grid, check_decay=False)
    sigma = discrete_norm(T, h) / target
    p = _potential_energy(params, R, h)

    distance = math.inf
    residual = math.inf
    iteration = 0
    for iteration in range(1, max_iter + 1):
        residual = discrete_norm(sigma * V - T, h) / sigma
        if residual <= tol and distance <= tol:
            break

        V_next = T / sigma
        V_next = 0.5 * (V_next + V_next[::-1])
        _check_unimodal(V_next, grid, iteration)

        distance = discrete_norm(V_next - V, h)
        V = V_next
        R = box_average(V, grid, check_decay=False)
        T = box_average(force(params, R), grid, check_decay=False)
        sigma = discrete_norm(T, h) / target

        p_next = _potential_energy(params, R, h)
        if p_next < p - ENERGY_DECREASE_TOLERANCE * max(1.0, abs(p)):
            raise ConvergenceFailure(
                f"Potential energy decreased at iteration {iteration}: {p:.15e} -> {p_next:.15e}"
            )
        p = p_next

        if iteration % 500 == 0:
            logger.debug("iteration %d: sigma=%.12e residual=%.3e distance=%.3e",
                         iteration, sigma, residual, distance)
    else:
        raise ConvergenceFailure(
            f"No convergence within {max_iter} iterations (residual {residual:.3e}, "
            f"distance {distance:.3e})"
        )

    edge = max(abs(V[0]), abs(V[-1]))
    if edge > TRUNCATION_LIMIT * float(np.max(V)):
        raise TruncationError(
            f"Wave has not decayed at x = +-{grid.half_width}: |V| = {edge:.3e}; increase X"
        )

    eps = 1.0 - float(R[grid.center])
    wave = WaveSolution(
        m=params.m,
        grid=grid,
        R=R,
        V=V,
        sigma=sigma,
        delta=delta,
        eps=eps,
        mu=math.sqrt(sigma * eps ** (params.m + 2.0)),
        p=p,
        residual=residual,
        iterations=iteration,
    )
    logger.info("Wave converged after %d iterations: sigma=%.10e, eps=%.10f, residual=%.2e",
                iteration, sigma, eps, residual)
    return wave


def wave_derivatives(wave: WaveSolution) -> Tuple[np.ndarray, np.ndarray]:
    """(S1, W1) = (R', V'), the translation mode of the linearization."""
    h = wave.grid.h
    return first_derivative(wave.R, h), first_derivative(wave.V, h)


def second_order_residual(wave: WaveSolution, params: PotentialParams) -> np.ndarray:
    """R'' - (1/sigma)(Phi'(R)(x+1) + Phi'(R)(x-1) - 2 Phi'(R)(x)) on the grid."""
    grid = wave.grid
    F = force(params, wave.R)
    shift_by = grid.unit_shift
    laplacian = shift(F, shift_by) + shift(F, -shift_by) - 2.0 * F
    return second_derivative(wave.R, grid.h) - laplacian / wave.sigma


def fpu_energy(wave: WaveSolution, params: PotentialParams) -> float:
    """H = integral of (sigma/2) V^2 + Phi(R), the chain energy carried by the wave."""
    integrand = 0.5 * wave.sigma * wave.V ** 2 + potential(params, wave.R)
    return float(trapezoid(integrand, dx=wave.grid.h))


def limit_profiles(grid: Grid) -> Tuple[np.ndarray, np.ndarray]:
    """Indicator of [-1/2, 1/2] and the tent map max(0, 1 - |x|)."""
    ax = np.abs(grid.x)
    V0 = np.where(ax < 0.5, 1.0, 0.0)
    V0[np.isclose(ax, 0.5)] = 0.5
    R0 = np.maximum(0.0, 1.0 - ax)
    return V0, R0


def compare_with_hat_profiles(wave: WaveSolution, ode: LimitOde) -> HatComparison:
    """Errors of (R, V, mu, sigma) against the approximation at the measured eps."""
    if abs(ode.m - wave.m) > 1e-12:
        raise ConfigurationError(f"Limit ODE m={ode.m} does not match wave m={wave.m}")
    h = wave.grid.h
    R_hat, V_hat = eval_hat_profiles(ode, wave.eps, wave.grid.x)
    hat = hat_scalars(ode, wave.eps)
    dR = wave.R - R_hat
    dV = wave.V - V_hat
    return HatComparison(
        delta=wave.delta,
        eps=wave.eps,
        mu_hat=hat.mu_hat,
        sigma_hat=hat.sigma_hat,
        err_R_inf=float(np.max(np.abs(dR))),
        err_R_l1=float(h * np.sum(np.abs(dR))),
        err_R_l2=discrete_norm(dR, h),
        err_V_inf=float(np.max(np.abs(dV))),
        err_V_l1=float(h * np.sum(np.abs(dV))),
        err_V_l2=discrete_norm(dV, h),
        err_mu_scaled=abs(wave.mu - hat.mu_hat) / wave.eps,
        err_sigma_scaled=wave.eps ** wave.m * abs(wave.sigma - hat.sigma_hat),
    )


def nondegeneracy(params: PotentialParams, grid: Grid, deltas: Iterable[float],
                  tol: float = 1e-8, max_iter: int = 20000,
                  waves: Optional[Sequence[WaveSolution]] = None) -> NondegeneracyTable:
    """Tabulate sigma, H and their finite-difference derivatives in delta.

    Args:
        params: Potential parameters.
        grid: Spatial grid shared by all waves.
        deltas: At least three distinct values.
        tol, max_iter: Solver settings when waves are computed here.
        waves: Precomputed waves (matched to deltas by value).

    Returns:
        NondegeneracyTable ordered by increasing delta; non-monotone sigma is
        flagged, not raised.
    """
    delta_list = sorted(set(float(d) for d in deltas))
    if len(delta_list) < 3:
        raise ConfigurationError("nondegeneracy needs at least three distinct delta values")

    by_delta = {}
    for wave in waves or []:
        by_delta[round(wave.delta, 14)] = wave
    solved: List[WaveSolution] = []
    for d in delta_list:
        wave = by_delta.get(round(d, 14))
        solved.append(wave if wave is not None else solve_wave(params, d, grid, tol, max_iter))

    d_arr = np.array(delta_list)
    sigma = np.array([w.sigma for w in solved])
    H = np.array([fpu_energy(w, params) for w in solved])
    dsigma = np.gradient(sigma, d_arr)
    dH = np.gradient(H, d_arr)

    rows = []
    for i, d in enumerate(delta_list):
        interior = 0 < i < len(delta_list) - 1
        row = NondegeneracyRow(
            delta=d, sigma=float(sigma[i]), H=float(H[i]),
            dsigma_ddelta=float(dsigma[i]), dH_ddelta=float(dH[i]), interior=interior,
        )
        if interior:
            forward_s = (sigma[i + 1] - sigma[i]) / (d_arr[i + 1] - d_arr[i])
            backward_s = (sigma[i] - sigma[i - 1]) / (d_arr[i] - d_arr[i - 1])
            forward_h = (H[i + 1] - H[i]) / (d_arr[i + 1] - d_arr[i])
            backward_h = (H[i] - H[i - 1]) / (d_arr[i] - d_arr[i - 1])
            row.dsigma_err = float(abs(forward_s - backward_s) / 2.0)
            row.dH_err = float(abs(forward_h - backward_h) / 2.0)
            row.dH_significant = bool(abs(dH[i]) >= 10.0 * row.dH_err)
        rows.append(row)

    monotone = bool(np.all(np.diff(sigma) < 0.0))
    if not monotone:
        logger.warning("sigma is not decreasing in delta over %s; suspect solver failure", delta_list)
    return NondegeneracyTable(rows=rows, sigma_monotone=monotone)
