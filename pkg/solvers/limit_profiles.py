"""Limit ODE, its constants, and the global high-energy approximations.

The limit problem

    S'' = (2/(m+1)) (1 + S)^-(m+1),   S(0) = S'(0) = 0

is integrated with the classical fourth-order Runge-Kutta scheme at a fixed
step, checked against the energy identity

    S'^2 = mu_bar^2 - 4/(m(m+1)) (1 + S)^-m,   mu_bar = 2 / sqrt(m(m+1)),

and a step-doubling (Richardson) estimate. Profiles between samples are
evaluated with cubic Hermite interpolation of (S, S') and (S', S''), which keeps
the integrator's order; beyond the table the affine closure
S ~ mu_bar xbar - kappa_bar with its first correction is used.

Author: FPU Waves maintainers
Created: 2026-10-17
Version: 1.0.0
License: MIT

Functions:
    solve_limit_ode: Tabulate S_bar and S_bar'.
    kappa_bar: kappa_bar by quadrature and by extrapolation of S'(X) X - S(X).
    eval_S: S_bar, S_bar', S_bar'' at arbitrary arguments (even/odd extension).
    hat_scalars: mu_hat and sigma_hat at a given eps.
    eval_hat_profiles: R_hat and V_hat.
    interface_jump: Branch mismatches of R_hat and V_hat.
"""

import logging
import math
from typing import Dict, Iterable, Tuple, Union

import numpy as np
from scipy.integrate import simpson
from scipy.interpolate import CubicHermiteSpline

from models.limit_ode import AsymptoticProfiles, InterfaceJumps, KappaEstimate, LimitOde
from utils.errors import ConfigurationError, IntegrationFailure, ProfileRangeError

logger = logging.getLogger(__name__)

ENERGY_DRIFT_LIMIT = 1e-6
KAPPA_ROUTE_TOLERANCE = 1e-5
EXTRAPOLATION_NODES = 5
MAX_EXTENSION = 20.0

ArrayLike = Union[float, np.ndarray]


def _rk4_table(m: float, h: float, n: int) -> Tuple[np.ndarray, np.ndarray]:
    coeff = 2.0 / (m + 1.0)
    power = -(m + 1.0)
    half = 0.5 * h
    sixth = h / 6.0

    S = np.empty(n + 1)
    dS = np.empty(n + 1)
    S[0] = 0.0
    dS[0] = 0.0
    s = 0.0
    v = 0.0
    for i in range(1, n + 1):
        a1 = coeff * (1.0 + s) ** power
        v2 = v + half * a1
        a2 = coeff * (1.0 + s + half * v) ** power
        v3 = v + half * a2
        a3 = coeff * (1.0 + s + half * v2) ** power
        v4 = v + h * a3
        a4 = coeff * (1.0 + s + h * v3) ** power
        s += sixth * (v + 2.0 * v2 + 2.0 * v3 + v4)
        v += sixth * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
        S[i] = s
        dS[i] = v
    return S, dS


def second_derivative(m: float, S: ArrayLike) -> ArrayLike:
    """Right-hand side (2/(m+1)) (1+S)^-(m+1) of the limit ODE."""
    return 2.0 / (m + 1.0) * np.power(1.0 + np.asarray(S, dtype=float), -(m + 1.0))


def energy_residual(m: float, S: np.ndarray, dS: np.ndarray) -> float:
    """Max deviation from the energy identity over the samples."""
    mu_bar = 2.0 / math.sqrt(m * (m + 1.0))
    residual = dS ** 2 - mu_bar ** 2 + 4.0 / (m * (m + 1.0)) * np.power(1.0 + S, -m)
    return float(np.max(np.abs(residual)))


def tail_bound(ode: LimitOde) -> float:
    """Bound on mu_bar - S'(xbar_max) implied by the energy identity."""
    s_end = ode.S[-1]
    ds_end = ode.dS[-1]
    return 4.0 / (ode.m * (ode.m + 1.0)) * (1.0 + s_end) ** (-ode.m) / (ode.mu_bar + ds_end)


def solve_limit_ode(m: float, xbar_max: float, step: float,
                    richardson: bool = True) -> LimitOde:
    """Integrate the limit ODE on [0, xbar_max] with a fixed RK4 step.

    The step is shrunk slightly so that xbar_max is a grid node.

    Args:
        m: Potential exponent, m > 1.
        xbar_max: Extent of the table.
        step: Requested step size.
        richardson: Also integrate at twice the step and record the
            step-doubling error estimate.

    Returns:
        LimitOde with samples, mu_bar, kappa_bar and diagnostics.

    Raises:
        ConfigurationError: On invalid m, xbar_max or step.
        IntegrationFailure: If the energy identity drifts beyond 1e-6.

    Example:
        >>> ode = solve_limit_ode(2.0, 50.0, 1e-3)
        >>> round(ode.mu_bar, 6)
        0.816497
    """
    if m <= 1.0:
        raise ConfigurationError(f"m must be > 1, got {m}")
    if xbar_max <= 0.0 or step <= 0.0:
        raise ConfigurationError(f"xbar_max and step must be positive, got {xbar_max}, {step}")

    n = max(2, int(math.ceil(xbar_max / step - 1e-9)))
    h = xbar_max / n
    logger.debug("Integrating limit ODE: m=%s, xbar_max=%s, %d steps of %.3e", m, xbar_max, n, h)

    S, dS = _rk4_table(m, h, n)
    if not (np.all(np.isfinite(S)) and np.all(np.isfinite(dS))):
        raise IntegrationFailure(f"Limit ODE integration produced non-finite values (step {h:.3e})")

    residual = energy_residual(m, S, dS)
    if residual > ENERGY_DRIFT_LIMIT:
        raise IntegrationFailure(
            f"Energy identity drift {residual:.3e} exceeds {ENERGY_DRIFT_LIMIT:.0e}; "
            f"step {h:.3e} is too large"
        )

    richardson_error = None
    if richardson and n % 2 == 0:
        S_coarse, _ = _rk4_table(m, 2.0 * h, n // 2)
        richardson_error = float(np.max(np.abs(S[::2] - S_coarse)) / 15.0)

    xbar = np.linspace(0.0, xbar_max, n + 1)
    mu_bar = 2.0 / math.sqrt(m * (m + 1.0))

    ode = LimitOde(
        m=m,
        xbar_max=xbar_max,
        step=h,
        xbar=xbar,
        S=S,
        dS=dS,
        mu_bar=mu_bar,
        kappa_bar=0.0,
        energy_residual=residual,
        richardson_error=richardson_error,
    )
    estimate = kappa_bar(ode)
    ode.kappa_bar = estimate.value
    ode.kappa = estimate

    logger.info(
        "Limit ODE solved: m=%s, mu_bar=%.10f, kappa_bar=%.10f, energy residual=%.2e",
        m, mu_bar, estimate.value, residual
    )
    return ode


def kappa_tail(m: float, X: float, mu_bar: float, kappa: float) -> float:
    """Integral of xbar * S'' over (X, inf) under the closure 1 + S = 1 - kappa + mu_bar xbar."""
    b = 1.0 - kappa
    U = b + mu_bar * X
    return 2.0 / (m + 1.0) / mu_bar ** 2 * (U ** (1.0 - m) / (m - 1.0) - b * U ** (-m) / m)


def leading_kappa_tail(m: float, X: float) -> float:
    """Leading-order tail (2/(m+1)) mu_bar^-(m+1) X^(1-m) / (m-1)."""
    mu_bar = 2.0 / math.sqrt(m * (m + 1.0))
    return 2.0 / (m + 1.0) * mu_bar ** (-(m + 1.0)) * X ** (1.0 - m) / (m - 1.0)


def partial_kappa(ode: LimitOde, X: float) -> float:
    """Simpson quadrature of xbar * S'' over [0, X] on the tabulated samples."""
    stop = int(round(X / ode.step)) + 1
    if stop > ode.xbar.size or stop < 3:
        raise ProfileRangeError(f"Partial integral up to {X} outside table [0, {ode.xbar_max}]")
    xb = ode.xbar[:stop]
    integrand = xb * second_derivative(ode.m, ode.S[:stop])
    return float(simpson(integrand, x=xb))


def extrapolated_kappa(ode: LimitOde) -> float:
    """Limit of S'(X) X - S(X) as X -> inf from the table alone.

    S'(X) X - S(X) = kappa_bar - sum_j A_j X^(1-m-j); kappa_bar is the
    constant of the exact fit through EXTRAPOLATION_NODES table nodes spread
    over [xbar_max / 2, xbar_max].
    """
    n = ode.xbar.size - 1
    idx = np.unique(np.round(np.linspace(n // 2, n, EXTRAPOLATION_NODES)).astype(int))
    X = ode.xbar[idx]
    g = ode.dS[idx] * X - ode.S[idx]
    if idx.size < EXTRAPOLATION_NODES:
        return float(g[-1])
    s = X[-1] / X
    basis = np.column_stack([np.ones_like(s)] + [s ** (ode.m - 1.0 + j) for j in range(idx.size - 1)])
    return float(np.linalg.solve(basis, g)[0])


def kappa_bar(ode: LimitOde) -> KappaEstimate:
    """Evaluate kappa_bar by quadrature and by extrapolating S'(X) X - S(X).

    The quadrature route integrates xbar * S'' over [0, xbar_max] and adds the
    closure tail after one fixed-point update of the kappa it depends on. The
    second route uses only tabulated S and S'. A disagreement above
    KAPPA_ROUTE_TOLERANCE is logged as a warning.
    """
    X = ode.xbar_max
    quadrature = partial_kappa(ode, X)
    by_parts = extrapolated_kappa(ode)

    first_guess = quadrature + kappa_tail(ode.m, X, ode.mu_bar, quadrature)
    tail = kappa_tail(ode.m, X, ode.mu_bar, first_guess)
    value = quadrature + tail
    gap = abs(value - by_parts)
    if gap > KAPPA_ROUTE_TOLERANCE:
        logger.warning("kappa_bar routes disagree by %.3e (quadrature %.10f, extrapolated %.10f)",
                       gap, value, by_parts)

    return KappaEstimate(
        value=value,
        quadrature=quadrature,
        by_parts=by_parts,
        tail=tail,
        route_gap=gap,
    )


def _spline(ode: LimitOde, derivative: int) -> CubicHermiteSpline:
    key = f"d{derivative}"
    if key not in ode._splines:
        if derivative == 0:
            ode._splines[key] = CubicHermiteSpline(ode.xbar, ode.S, ode.dS)
        else:
            ode._splines[key] = CubicHermiteSpline(
                ode.xbar, ode.dS, second_derivative(ode.m, ode.S)
            )
    return ode._splines[key]


def _closure(ode: LimitOde, a: np.ndarray, derivative: int) -> np.ndarray:
    m = ode.m
    mu = ode.mu_bar
    coeff = 2.0 / (m + 1.0)
    u = 1.0 - ode.kappa_bar + mu * a
    if derivative == 0:
        return mu * a - ode.kappa_bar + coeff * u ** (1.0 - m) / (m * (m - 1.0) * mu ** 2)
    if derivative == 1:
        return mu - coeff * u ** (-m) / (m * mu)
    return coeff * u ** (-(m + 1.0))


def eval_S(ode: LimitOde, xbar: ArrayLike, derivative: int = 0) -> ArrayLike:
    """Evaluate S_bar (derivative 0), S_bar' (1) or S_bar'' (2) on the real line.

    S_bar is extended evenly and S_bar' oddly. Arguments beyond the table use
    the affine closure, up to 20 table lengths.

    Raises:
        ProfileRangeError: For arguments beyond the supported extension.
    """
    scalar = np.ndim(xbar) == 0
    xb = np.atleast_1d(np.asarray(xbar, dtype=float))
    a = np.abs(xb)
    limit = MAX_EXTENSION * ode.xbar_max
    if np.any(a > limit):
        raise ProfileRangeError(
            f"S_bar evaluated at |xbar| = {float(np.max(a)):.6g} beyond supported range {limit:.6g}"
        )

    if derivative == 2:
        values = second_derivative(ode.m, eval_S(ode, a, 0))
    else:
        values = np.empty_like(a)
        inside = a <= ode.xbar_max
        if np.any(inside):
            values[inside] = _spline(ode, derivative)(a[inside])
        if np.any(~inside):
            values[~inside] = _closure(ode, a[~inside], derivative)
        if derivative == 1:
            values = np.sign(xb) * values

    return float(values[0]) if scalar else values


def W_bar(ode: LimitOde, xbar: ArrayLike) -> ArrayLike:
    """W_bar = (S_bar' + mu_bar) / 2 with S_bar' odd."""
    return 0.5 * (eval_S(ode, xbar, 1) + ode.mu_bar)


def T_bar(ode: LimitOde, xbar: ArrayLike) -> ArrayLike:
    """T_bar = (S_bar + mu_bar xbar + kappa_bar) / 2 with S_bar even."""
    return 0.5 * (eval_S(ode, xbar, 0) + ode.mu_bar * np.asarray(xbar, dtype=float) + ode.kappa_bar)


def hat_scalars(ode: LimitOde, eps: float) -> AsymptoticProfiles:
    """mu_hat = mu_bar eps / (1 + eps (kappa_bar - 1)) and sigma_hat = eps^(-m-2) mu_hat^2."""
    if not 0.0 < eps < 1.0:
        raise ConfigurationError(f"eps must lie in (0, 1), got {eps}")
    mu_hat = ode.mu_bar * eps / (1.0 + eps * (ode.kappa_bar - 1.0))
    sigma_hat = eps ** (-ode.m - 2.0) * mu_hat ** 2
    return AsymptoticProfiles(m=ode.m, eps=eps, mu_hat=mu_hat, sigma_hat=sigma_hat)


def eval_hat_profiles(ode: LimitOde, eps: float, x: ArrayLike) -> Tuple[ArrayLike, ArrayLike]:
    """Piecewise approximations R_hat and V_hat at eps.

    R_hat = 1 - eps - eps S_bar(|x|/mu_hat)        for |x| < 1/2
          = eps T_bar((1 - |x|)/mu_hat)            for 1/2 <= |x| < 3/2
          = 0                                      otherwise
    V_hat = (eps/mu_hat) W_bar((1/2 - |x|)/mu_hat) for |x| < 1, else 0

    Args:
        ode: Limit ODE table.
        eps: Small parameter in (0, 1).
        x: Evaluation point(s).

    Returns:
        Tuple (R_hat, V_hat) with the shape of x.
    """
    hat = hat_scalars(ode, eps)
    mu_hat = hat.mu_hat
    scalar = np.ndim(x) == 0
    ax = np.abs(np.atleast_1d(np.asarray(x, dtype=float)))

    R = np.zeros_like(ax)
    V = np.zeros_like(ax)

    core = ax < 0.5
    flank = (ax >= 0.5) & (ax < 1.5)
    support = ax < 1.0

    if np.any(core):
        R[core] = 1.0 - eps - eps * eval_S(ode, ax[core] / mu_hat, 0)
    if np.any(flank):
        R[flank] = eps * T_bar(ode, (1.0 - ax[flank]) / mu_hat)
    if np.any(support):
        V[support] = eps / mu_hat * W_bar(ode, (0.5 - ax[support]) / mu_hat)

    if scalar:
        return float(R[0]), float(V[0])
    return R, V


def interface_jump(ode: LimitOde, eps: float) -> InterfaceJumps:
    """Absolute mismatches of the piecewise branches at |x| = 1/2, 3/2 (R_hat) and 1 (V_hat)."""
    mu_hat = hat_scalars(ode, eps).mu_hat
    y = 0.5 / mu_hat
    inner = 1.0 - eps - eps * eval_S(ode, y, 0)
    outer = eps * T_bar(ode, y)
    return InterfaceJumps(
        eps=eps,
        jump_R_half=abs(inner - outer),
        jump_R_three_halves=abs(eps * T_bar(ode, -y)),
        jump_V_one=abs(eps / mu_hat * W_bar(ode, -y)),
    )


def jump_decay_orders(ode: LimitOde, eps_values: Iterable[float]) -> Dict[str, float]:
    """Fitted log-log decay order of each interface jump over eps_values."""
    eps_list = sorted(eps_values)
    jumps = [interface_jump(ode, e) for e in eps_list]
    log_eps = np.log(eps_list)
    orders = {}
    for name in ("jump_R_half", "jump_R_three_halves", "jump_V_one"):
        values = np.array([getattr(j, name) for j in jumps])
        orders[name] = float(np.polyfit(log_eps, np.log(values), 1)[0])
    return orders
