"""Rescaled kernel analysis near the high-energy limit.

With xt = x / ell the weighted kernel equation becomes the fixed point
problem

    G = H * Delta_{1/ell, -a}(Q~ G),   H(xt) = -xt e^{ell a xt} [xt < 0],

with Q~ = (ell^2 / sigma) Phi''(R). As delta -> 0, Q~ tends to

    P(xt) = mu_bar^-2 (1 + S_bar(|xt| / mu_bar))^-(m+2)

and kernel functions collapse onto the odd solution T_o of T'' = -2 P T,
which is S_bar'(|xt| / mu_bar) / mu_bar extended oddly.

Author: FPU Waves maintainers
Created: 2026-10-17
Version: 1.0.0
License: MIT

Functions:
    rescaling_length: ell from mu_delta or delta.
    build_P_tilde: The limit coefficient P on a rescaled grid.
    odd_certificate: ||T_o'' + 2 P T_o||_inf on the limit ODE table.
    solve_T_pair: T_e by shooting jointly with the limit ODE, and T_o.
    green_convolve: H * F on a uniform grid.
    commutation_gap: H * (Delta F) against (Delta H) * F.
    lemma4_bounds: Empirical Green's function constants across delta.
    rescale_and_fit: Normalized rescaled kernel and its (c_e, c_o) fit.
    asymptotic_ode_residuals: E0 and E+ on the core interval.
"""

import logging
import math
from typing import Dict, List, Sequence, Tuple

import numpy as np
from scipy.integrate import solve_ivp, trapezoid
from scipy.signal import convolve

from models.limit_ode import LimitOde
from models.potential import PotentialParams
from models.rescaled_kernel import ErrorTermReport, Lemma4Report, RescaledKernel, TPair
from models.wave_solution import WaveSolution
from solvers.limit_profiles import eval_S
from solvers.potential import stiffness
from solvers.stencils import discrete_norm, first_derivative, second_derivative
from utils.errors import ConfigurationError, IntegrationFailure, ProfileRangeError

logger = logging.getLogger(__name__)

MIN_SHOOTING_EXTENT = 200.0
DEGENERATE_SLOPE = 1e-6
LEMMA4_GROWTH_LIMIT = 2.0


def rescaling_length(wave: WaveSolution, mu_bar: float, mode: str = "mu") -> float:
    """ell = mu_delta / mu_bar ("mu") or ell = delta ("delta")."""
    if mode == "mu":
        return wave.mu / mu_bar
    if mode == "delta":
        return wave.delta
    raise ConfigurationError(f"Unknown rescaling mode {mode!r}; expected 'mu' or 'delta'")


def build_P_tilde(ode: LimitOde, xt: np.ndarray) -> np.ndarray:
    """P(xt) = mu_bar^-2 (1 + S_bar(|xt|/mu_bar))^-(m+2); even and positive.

    Raises:
        ProfileRangeError: If |xt| / mu_bar exceeds the range of the S_bar table.
    """
    xbar = np.abs(np.asarray(xt, dtype=float)) / ode.mu_bar
    S = eval_S(ode, xbar, 0)
    return ode.mu_bar ** -2 * np.power(1.0 + S, -(ode.m + 2.0))


def odd_certificate(ode: LimitOde) -> float:
    """sup |T_o'' + 2 P T_o| on the limit ODE table in the rescaled variable.

    T_o = S_bar' / mu_bar and derivatives are taken with fourth-order
    differences on the table spacing mu_bar * step.
    """
    mu = ode.mu_bar
    To = ode.dS / mu
    P = mu ** -2 * np.power(1.0 + ode.S, -(ode.m + 2.0))
    residual = second_derivative(To, mu * ode.step) + 2.0 * P * To
    return float(np.max(np.abs(residual)))


def _joint_rhs(m: float):
    coeff = 2.0 / (m + 1.0)

    def rhs(_, y):
        S, dS, T, dT = y
        base = 1.0 + S
        return [dS, coeff * base ** (-(m + 1.0)), dT, -2.0 * base ** (-(m + 2.0)) * T]

    return rhs


def solve_T_pair(ode: LimitOde, xt: np.ndarray) -> TPair:
    """Even and odd solutions of T'' = -2 P T sampled at xt.

    The even solution is shot from T(0) = 1, T'(0) = 0 together with the
    limit ODE in xbar = xt / mu_bar (DOP853, dense output), so T_o = S'/mu_bar
    shares the integration. The even shot is divided by its limit slope,
    measured at the end of the integration with a one-term tail correction.

    Raises:
        IntegrationFailure: If the integration fails or the limit slope is
            degenerate (|slope| < 1e-6).
    """
    m = ode.m
    mu = ode.mu_bar
    xt = np.asarray(xt, dtype=float)
    xbar_end = max(MIN_SHOOTING_EXTENT, 1.01 * float(np.max(np.abs(xt))) / mu)

    sol = solve_ivp(
        _joint_rhs(m), (0.0, xbar_end), [0.0, 0.0, 1.0, 0.0],
        method="DOP853", rtol=1e-12, atol=1e-14, dense_output=True,
    )
    if not sol.success:
        raise IntegrationFailure(f"Shooting for the even solution failed: {sol.message}")

    S_end, dS_end, T_end, dT_end = sol.y[:, -1]
    xt_end = mu * xbar_end
    slope = (dT_end / mu) / (1.0 + 0.5 * (m + 1.0) * xt_end ** (-m))
    if abs(slope) < DEGENERATE_SLOPE:
        raise IntegrationFailure(f"Even solution has degenerate limit slope {slope:.3e}")
    wronskian_slope = -0.5 * m
    logger.debug("T_e limit slope %.12f (Wronskian value %.12f)", slope, wronskian_slope)

    a = np.abs(xt)
    S, dS, T, dT = sol.sol(a / mu)
    sign = np.sign(xt)
    Te = T / slope
    dTe = sign * (dT / mu) / slope
    To = sign * dS / mu
    dTo = (2.0 / (m + 1.0)) * np.power(1.0 + S, -(m + 1.0)) / mu ** 2

    wronskian = Te * dTo - dTe * To
    right = a >= 1.0
    xt_right = a[right]
    return TPair(
        xt=xt,
        Te=Te,
        To=To,
        dTe=dTe,
        dTo=dTo,
        limit_slope=float(slope),
        wronskian_slope=wronskian_slope,
        wronskian=float(np.mean(wronskian)),
        wronskian_spread=float(np.max(wronskian) - np.min(wronskian)),
        even_affine_bound=float(np.max(np.abs(dTe * a * sign - Te)[xt >= 0.0], initial=0.0)),
        even_slope_bound=float(np.max(np.abs((np.abs(dTe[right]) - 1.0) * xt_right ** m), initial=0.0)),
        odd_slope_bound=float(np.max(np.abs(dTo[right] * xt_right ** m), initial=0.0)),
        odd_tail=float(dS_end / mu - 1.0),
    )


def _green_kernel(n: int, b: float, ht: float) -> np.ndarray:
    d = np.arange(-(n - 1), n) * ht
    kernel = np.zeros(2 * n - 1)
    positive = d > 0.0
    kernel[positive] = ht * d[positive] * np.exp(-b * d[positive])
    return kernel


def _convolve_with(F: np.ndarray, kernel_full: np.ndarray, method: str) -> np.ndarray:
    n = F.shape[0]
    full = convolve(F[::-1], kernel_full, mode="full", method=method)
    return full[n - 1:2 * n - 1][::-1]


def green_convolve(F: np.ndarray, delta: float, a: float, ht: float,
                   method: str = "auto") -> np.ndarray:
    """u(xt_i) = ht * sum_j H(xt_i - xt_j) F_j with H(xt) = -xt e^{delta a xt} for xt < 0.

    Solves (d/dxt - delta a)^2 u = F up to O(ht^2) on interior nodes.

    Args:
        F: Samples on a uniform grid.
        delta: Rescaling length.
        a: Exponential weight of the physical problem.
        ht: Grid spacing.
        method: "direct" or "fft" convolution ("auto" chooses).
    """
    F = np.asarray(F, dtype=float)
    return _convolve_with(F, _green_kernel(F.shape[0], delta * a, ht), method)


def green_residual(u: np.ndarray, F: np.ndarray, delta: float, a: float, ht: float) -> np.ndarray:
    """(d/dxt - delta a)^2 u - F on interior nodes with second-order central differences."""
    d2 = (u[2:] - 2.0 * u[1:-1] + u[:-2]) / ht ** 2
    d1 = (u[2:] - u[:-2]) / (2.0 * ht)
    b = delta * a
    return d2 - 2.0 * b * d1 + b ** 2 * u[1:-1] - F[1:-1]


def weighted_laplacian(F: np.ndarray, shift_nodes: int, a: float) -> np.ndarray:
    """e^{-a} F(xt + s) + e^{a} F(xt - s) - 2 F(xt), zero fill beyond the grid."""
    out = -2.0 * F
    out[:-shift_nodes] += math.exp(-a) * F[shift_nodes:]
    out[shift_nodes:] += math.exp(a) * F[:-shift_nodes]
    return out


def commutation_gap(F: np.ndarray, delta: float, a: float, ht: float, shift_nodes: int) -> float:
    """Relative max gap between H * (Delta F) and (Delta H) * F, both by direct sums."""
    n = F.shape[0]
    lhs = green_convolve(weighted_laplacian(F, shift_nodes, a), delta, a, ht, method="direct")
    base = _green_kernel(n + shift_nodes, delta * a, ht)
    center = n + shift_nodes - 1
    offsets = np.arange(-(n - 1), n)
    shifted_kernel = (math.exp(-a) * base[center + offsets - shift_nodes]
                      + math.exp(a) * base[center + offsets + shift_nodes]
                      - 2.0 * base[center + offsets])
    rhs = _convolve_with(F, shifted_kernel, "direct")
    scale = float(np.max(np.abs(lhs)))
    return float(np.max(np.abs(lhs - rhs)) / scale) if scale > 0.0 else 0.0


def _random_test_function(xt: np.ndarray, rng: np.random.Generator, bumps: int = 3) -> np.ndarray:
    centers = rng.uniform(-5.0, 5.0, bumps)
    widths = rng.uniform(0.5, 2.0, bumps)
    amplitudes = rng.standard_normal(bumps)
    F = np.zeros_like(xt)
    for c, w, amp in zip(centers, widths, amplitudes):
        F += amp * np.exp(-0.5 * ((xt - c) / w) ** 2)
    return F


def lemma4_bounds(deltas: Sequence[float], trials: int = 20, seed: int = 12345,
                  a: float = 1.0, ht: float = 0.05) -> Lemma4Report:
    """Empirical constants of the Green's function estimates over random test functions.

    For u = H * F with b = delta a the ratios

        (delta^2 ||u||_2 + delta ||u'||_2 + ||u''||_2) / ||F||_2
        delta^(1/2) ||u'||_inf / ||F||_2
        ||u'||_inf / ||F||_1

    are maximized over trials for each delta on [-12/(delta a), 12/(delta a)].
    The run passes when no constant grows by more than 2x relative to the
    largest delta. Trial k uses the generator seeded with seed + k at every
    delta, so all deltas see the same test functions.
    """
    delta_list = sorted((float(d) for d in deltas), reverse=True)
    if not delta_list or trials < 1:
        raise ConfigurationError("lemma4_bounds needs at least one delta and one trial")

    names = ("l2_chain", "sup_l2", "sup_l1")
    constants: Dict[str, List[float]] = {name: [] for name in names}
    gaps: List[float] = []

    for delta in delta_list:
        half_width = 12.0 / (delta * a)
        n = 2 * int(round(half_width / ht)) + 1
        xt = (np.arange(n) - n // 2) * ht
        best = dict.fromkeys(names, 0.0)

        for trial in range(trials):
            F = _random_test_function(xt, np.random.default_rng(seed + trial))
            norm2 = discrete_norm(F, ht)
            norm1 = float(ht * np.sum(np.abs(F)))
            if norm2 == 0.0:
                continue
            u = green_convolve(F, delta, a, ht)
            du = first_derivative(u, ht)
            d2u = second_derivative(u, ht)
            ratios = {
                "l2_chain": (delta ** 2 * discrete_norm(u, ht) + delta * discrete_norm(du, ht)
                             + discrete_norm(d2u, ht)) / norm2,
                "sup_l2": math.sqrt(delta) * float(np.max(np.abs(du))) / norm2,
                "sup_l1": float(np.max(np.abs(du))) / norm1,
            }
            for name in names:
                best[name] = max(best[name], ratios[name])

        F0 = _random_test_function(xt, np.random.default_rng(seed))
        shift_nodes = int(round(1.0 / (delta * ht)))
        gaps.append(commutation_gap(F0, delta, a, ht, shift_nodes))
        for name in names:
            constants[name].append(best[name])
        logger.info("lemma4 delta=%s: %s", delta, {k: round(v, 6) for k, v in best.items()})

    growth = {}
    for name in names:
        reference = constants[name][0]
        growth[name] = float(max(constants[name]) / reference) if reference > 0.0 else math.inf
    passed = all(g <= LEMMA4_GROWTH_LIMIT for g in growth.values())

    return Lemma4Report(
        deltas=delta_list,
        trials=trials,
        a=a,
        constants=constants,
        growth=growth,
        commutation_gap=gaps,
        passed=passed,
    )


def rescale_and_fit(wave: WaveSolution, kernel_vector: np.ndarray, ode: LimitOde,
                    a: float, params: PotentialParams, ell_mode: str = "mu") -> RescaledKernel:
    """Rescale a weighted kernel vector and fit it by c_e T_e + c_o T_o.

    Args:
        wave: The wave the kernel belongs to.
        kernel_vector: G = e^{a x} S on the wave grid (from kernel_scan).
        ode: Limit ODE table with the same m.
        a: Weight used for kernel_vector.
        params: Potential parameters.
        ell_mode: "mu" or "delta", see ``rescaling_length``.

    Returns:
        RescaledKernel normalized by |G(0)| + ||P G||_1 + ||P G||_2 = 1 with St'(0) > 0.
    """
    grid = wave.grid
    if kernel_vector.shape != (grid.n_nodes,):
        raise ConfigurationError("Kernel vector does not match the wave grid")
    if abs(ode.m - wave.m) > 1e-12:
        raise ConfigurationError(f"Limit ODE m={ode.m} does not match wave m={wave.m}")

    m = wave.m
    ell = rescaling_length(wave, ode.mu_bar, ell_mode)
    xt = grid.x / ell
    ht = grid.h / ell
    c = grid.center
    core = np.abs(xt) <= 0.5 / ell + 1e-12

    try:
        Pt = build_P_tilde(ode, xt)
    except ProfileRangeError as exc:
        raise ProfileRangeError(f"Rescaled grid exceeds the limit ODE table: {exc}") from exc

    Qt = ell ** 2 / wave.sigma * stiffness(params, wave.R)
    Zt = ell ** -(m + 2.0) * (Qt - Pt)
    Qt_delta = wave.delta ** 2 / wave.sigma * stiffness(params, wave.R)
    Z_delta = wave.delta ** -(m + 2.0) * (Qt_delta - build_P_tilde(ode, grid.x / wave.delta))

    St = kernel_vector * np.exp(-a * grid.x)
    Gt = kernel_vector.copy()
    norm = abs(Gt[c]) + float(ht * np.sum(np.abs(Pt * Gt))) + discrete_norm(Pt * Gt, ht)
    if not norm > 0.0:
        raise ConfigurationError("Kernel vector vanishes; cannot normalize")
    dSt0 = first_derivative(St, ht)[c]
    scale = math.copysign(1.0 / norm, dSt0)
    St *= scale
    Gt *= scale
    dSt0 *= scale

    pair = solve_T_pair(ode, xt)
    c_e = float(St[c] / pair.Te[c])
    c_o = float(dSt0 / pair.dTo[c])
    misfit = np.abs(St - c_e * pair.Te - c_o * pair.To)
    core_idx = np.flatnonzero(core)
    endpoint = float(max(misfit[core_idx[0]], misfit[core_idx[-1]]))

    shift_nodes = grid.unit_shift
    fixed_point = green_convolve(weighted_laplacian(Qt * Gt, shift_nodes, a), ell, a, ht)
    fp_residual = discrete_norm(Gt - fixed_point, ht) / discrete_norm(Gt, ht)

    logger.info("Rescaled kernel (delta=%s, ell=%.5f): c_e=%.3e, c_o=%.6f, fp residual=%.2e",
                wave.delta, ell, c_e, c_o, fp_residual)
    return RescaledKernel(
        delta=wave.delta,
        ell=ell,
        ell_mode=ell_mode,
        a=a,
        xt=xt,
        St=St,
        Gt=Gt,
        Qt=Qt,
        Pt=Pt,
        Zt=Zt,
        Te=pair.Te,
        To=pair.To,
        c_e=c_e,
        c_o=c_o,
        sup_residual=float(np.max(misfit[core])),
        endpoint_residual=endpoint,
        fp_residual=fp_residual,
        Z_inf=float(np.max(np.abs(Zt))),
        Z_inf_delta=float(np.max(np.abs(Z_delta))),
    )


def asymptotic_ode_residuals(rk: RescaledKernel, shift_nodes: int,
                             keep_samples: bool = False) -> ErrorTermReport:
    """E0 = St'' + 2 Pt St and E+ = St''(xt + 1/ell) - Pt St on |xt| <= 1/(2 ell).

    Args:
        rk: Rescaled kernel.
        shift_nodes: Node offset of 1/ell (the unit shift of the physical grid).
        keep_samples: Attach E0 and E+ samples to the report.
    """
    ht = float(rk.xt[1] - rk.xt[0])
    d2 = second_derivative(rk.St, ht)
    core = np.flatnonzero(np.abs(rk.xt) <= 0.5 / rk.ell + 1e-12)
    if core[-1] + shift_nodes >= rk.xt.size:
        raise ConfigurationError("Grid too narrow for the shifted residual")

    E0 = d2[core] + 2.0 * rk.Pt[core] * rk.St[core]
    Eplus = d2[core + shift_nodes] - rk.Pt[core] * rk.St[core]
    total = np.abs(E0) + np.abs(Eplus)
    x_core = rk.xt[core]

    return ErrorTermReport(
        delta=rk.delta,
        sup_E0=float(np.max(np.abs(E0))),
        sup_Eplus=float(np.max(np.abs(Eplus))),
        int0=float(trapezoid(total, x=x_core)),
        int1=float(trapezoid(np.abs(x_core) * total, x=x_core)),
        E0=E0 if keep_samples else None,
        Eplus=Eplus if keep_samples else None,
    )


def fit_order(deltas: Sequence[float], values: Sequence[float]) -> float:
    """Least-squares slope of log(value) against log(delta); nan if any value is not positive."""
    d = np.asarray(deltas, dtype=float)
    v = np.asarray(values, dtype=float)
    if d.size < 2 or np.any(v <= 0.0):
        return math.nan
    return float(np.polyfit(np.log(d), np.log(v), 1)[0])
