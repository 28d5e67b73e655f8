"""Linearization about a solitary wave in exponentially weighted spaces.

The linearized first-order system is

    S' - (W(x + 1/2) - W(x - 1/2))            = 0
    W' - (1/sigma) ((Q S)(x + 1/2) - (Q S)(x - 1/2)) = 0,   Q = Phi''(R),

and eliminating W gives the advance-delay equation

    S'' = (1/sigma) ((Q S)(x + 1) + (Q S)(x - 1) - 2 Q S).

In the weight e^{a x}, G = e^{a x} S satisfies the conjugated equation whose
matrix is assembled here by scaling the unweighted entries with
e^{w_i - w_j}. Near-kernel directions of large matrices are found from the
largest singular values of the inverse (sparse LU plus ARPACK), since those
of the operator itself are tiny and clustered against a stiff upper spectrum;
small matrices are decomposed densely. Singular vectors concentrated at the
truncation edges are discarded as boundary modes.

Author: FPU Waves maintainers
Created: 2026-10-17
Version: 1.0.0
License: MIT
"""

import logging
import math
from typing import Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sp
from scipy.integrate import trapezoid
from scipy.optimize import brentq
from scipy.sparse.linalg import LinearOperator, gmres, splu, svds

from models.potential import PotentialParams
from models.spectral_report import JordanReport, LinearOperatorSpec, SpectralReport, VerdictStability
from models.wave_solution import Grid, WaveSolution
from solvers.potential import force, potential, stiffness
from solvers.stencils import discrete_norm, first_derivative, shift
from solvers.wave_solver import box_average, solve_wave, wave_derivatives
from utils.errors import ConfigurationError, SpectralDomainError

logger = logging.getLogger(__name__)

# A singular value is zero below threshold * median and ZERO_GAP * the next value.
ZERO_GAP = 0.1
# Below this ratio of the second to the first value the scan is inconclusive.
GAP_RATIO = 10.0
# Even restriction invertible when its smallest value exceeds this share of the odd second value.
EVEN_ODD_RATIO = 0.1
EDGE_BAND = 2.0
BOUNDARY_MODE_FRACTION = 0.5
EXTRA_VECTORS = 2
MAX_VECTORS = 256
DENSE_LIMIT = 1600


def _sinh_ratio(a: float) -> float:
    half = 0.5 * a
    return 1.0 if half == 0.0 else math.sinh(half) / half


def a_crit(c: float) -> float:
    """Critical weight a_c > 0 with sinh(a_c/2) / (a_c/2) = c.

    Bracketed by doubling, located with Brent's method and finished with
    Newton steps on sinh(a/2) - c a/2.

    Raises:
        SpectralDomainError: If c <= 1 (no positive root).

    Example:
        >>> a_crit(math.sinh(1.0))  # 2
    """
    if not c > 1.0:
        raise SpectralDomainError(f"Critical weight needs c > 1, got {c}")

    def g(a: float) -> float:
        return _sinh_ratio(a) - c

    upper = 1.0
    while g(upper) <= 0.0:
        upper *= 2.0
    a = brentq(g, 0.0, upper, xtol=1e-15, rtol=4.0 * np.finfo(float).eps, maxiter=200)

    for _ in range(8):
        f = math.sinh(0.5 * a) - 0.5 * c * a
        if abs(f) <= 1e-13 * max(1.0, 0.5 * c * a):
            break
        a -= f / (0.5 * math.cosh(0.5 * a) - 0.5 * c)
    return a


def b_star(c: float, a: float) -> float:
    """Spectral margin a - (2/c) sinh(a/2)."""
    return a - 2.0 / c * math.sinh(0.5 * a)


def essential_spectrum(c: float, a: float, kmax: float = 4.0 * math.pi,
                       nk: int = 801) -> SpectralReport:
    """Sample lambda = P_pm(i k - a), P_pm(mu) = mu +- (2/c) sinh(mu/2), for k in [-kmax, kmax].

    The largest real part over both curves is -b_star, attained at k = 0 on
    P_minus; it is exact when nk is odd.
    """
    if not c > 1.0:
        raise SpectralDomainError(f"Essential spectrum needs c > 1, got {c}")
    if a < 0.0:
        raise ConfigurationError(f"Weight must be nonnegative, got {a}")

    k = np.linspace(-kmax, kmax, nk)
    mu = 1j * k - a
    P_plus = mu + 2.0 / c * np.sinh(0.5 * mu)
    P_minus = mu - 2.0 / c * np.sinh(0.5 * mu)
    max_real = float(max(np.max(P_plus.real), np.max(P_minus.real)))

    return SpectralReport(
        a=a,
        c=c,
        a_c=a_crit(c),
        b_star=b_star(c, a),
        k=k,
        re_P_plus=P_plus.real,
        im_P_plus=P_plus.imag,
        re_P_minus=P_minus.real,
        im_P_minus=P_minus.imag,
        max_real_part=max_real,
    )


def build_operator_spec(wave: WaveSolution, params: PotentialParams,
                        a: Optional[float] = None, a_fraction: float = 0.5) -> LinearOperatorSpec:
    """Linearization data of a wave; a defaults to a_fraction * a_c."""
    c = wave.speed
    if not c > 1.0:
        raise SpectralDomainError(f"Wave speed {c} is not supersonic")
    if a is None:
        a = a_fraction * a_crit(c)
    return LinearOperatorSpec(wave=wave, a=a, Q=stiffness(params, wave.R), c=c)


def nabla_half(F: np.ndarray, grid: Grid) -> np.ndarray:
    """F(x + 1/2) - F(x - 1/2) with zero fill beyond the grid."""
    K = grid.half_shift
    return shift(F, K) - shift(F, -K)


def apply_L(spec: LinearOperatorSpec, S: np.ndarray, W: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Apply the first-order linearized operator with fourth-order derivatives.

    Returns:
        (S' - nabla W, W' - (1/sigma) nabla (Q S)).
    """
    grid = spec.grid
    h = grid.h
    first = first_derivative(S, h) - nabla_half(W, grid)
    second = first_derivative(W, h) - nabla_half(spec.Q * S, grid) / spec.sigma
    return first, second


def assemble_second_order(Q: np.ndarray, sigma: float, grid: Grid) -> sp.csr_matrix:
    """Unweighted D_h^2 - (1/sigma) Delta_1 (Q .) with zero fill beyond the grid."""
    n = grid.n_nodes
    L = grid.unit_shift
    inv_h2 = 1.0 / grid.h ** 2
    main = -2.0 * inv_h2 + 2.0 * Q / sigma
    side = np.full(n - 1, inv_h2)
    return sp.diags(
        [main, side, side, -Q[L:] / sigma, -Q[:n - L] / sigma],
        [0, 1, -1, L, -L],
        shape=(n, n),
        format="csr",
    )


def conjugate(M0: sp.spmatrix, w: np.ndarray) -> sp.csc_matrix:
    """Entries M0[i, j] * exp(w_i - w_j): the operator acting on e^w S."""
    coo = M0.tocoo()
    data = coo.data * np.exp(w[coo.row] - w[coo.col])
    return sp.csc_matrix((data, (coo.row, coo.col)), shape=coo.shape)


def second_order_matrix(spec: LinearOperatorSpec, symmetric: bool = False) -> sp.csc_matrix:
    """Weighted second-order matrix acting on G = e^{a x} S (or e^{a |x|} S if symmetric).

    Raises:
        SpectralDomainError: If a >= a_c.
    """
    a_c = a_crit(spec.c)
    if spec.a >= a_c:
        raise SpectralDomainError(f"Weight a={spec.a} is not below a_c={a_c}")
    x = spec.grid.x
    w = spec.a * (np.abs(x) if symmetric else x)
    return conjugate(assemble_second_order(spec.Q, spec.sigma, spec.grid), w)


def discrete_symbol(k: float, a: float, h: float, sigma: float, q: float) -> complex:
    """Eigenvalue of the weighted matrix on e^{i k x} for constant Q = q (interior rows)."""
    return ((2.0 * np.cosh(a * h - 1j * k * h) - 2.0) / h ** 2
            - q / sigma * (np.exp(-a + 1j * k) + np.exp(a - 1j * k) - 2.0))


def continuous_symbol(k: float, a: float, sigma: float, q: float) -> complex:
    """(i k - a)^2 - (q/sigma)(e^{-a + i k} + e^{a - i k} - 2)."""
    return (1j * k - a) ** 2 - q / sigma * (np.exp(-a + 1j * k) + np.exp(a - 1j * k) - 2.0)


def _smallest_singular(M: sp.csc_matrix, count: int) -> Tuple[np.ndarray, np.ndarray]:
    """Ascending smallest singular values of M and the matching right singular vectors.

    Matrices up to DENSE_LIMIT rows are decomposed densely and return every
    singular value; larger ones use ARPACK on the sparse LU inverse.
    """
    n = M.shape[0]
    if n <= DENSE_LIMIT:
        _, s, vt = np.linalg.svd(M.toarray())
        return s[::-1], vt[::-1].T
    count = min(count, n - 2)
    lu = splu(M.tocsc())
    inverse = LinearOperator(
        (n, n),
        matvec=lu.solve,
        rmatvec=lambda b: lu.solve(b, trans="T"),
        dtype=float,
    )
    v0 = np.linspace(1.0, 2.0, n)
    u, s, _ = svds(inverse, k=count, v0=v0, which="LM")
    values = 1.0 / s
    order = np.argsort(values)
    return values[order], u[:, order]


def edge_band(grid: Grid) -> float:
    """Width of the edge strips: EDGE_BAND, capped at a quarter of the half width."""
    return min(EDGE_BAND, 0.25 * grid.half_width)


def edge_fraction(vector: np.ndarray, grid: Grid) -> float:
    """Share of the squared mass within edge_band of the truncation edges."""
    outer = np.abs(grid.x) > grid.half_width - edge_band(grid)
    total = float(np.dot(vector, vector))
    return float(np.dot(vector[outer], vector[outer]) / total) if total > 0.0 else 0.0


def _interior_modes(values: np.ndarray, vectors: np.ndarray, grid: Grid,
                    expand=None) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    keep = np.zeros(values.size, dtype=bool)
    for i in range(values.size):
        full = vectors[:, i] if expand is None else expand @ vectors[:, i]
        keep[i] = edge_fraction(full, grid) <= BOUNDARY_MODE_FRACTION
    return values[keep], vectors[:, keep], values[~keep]


def interior_singular(M: sp.csc_matrix, grid: Grid, needed: int,
                      expand=None) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """The ``needed`` smallest interior singular pairs of M, where the grid allows.

    The number of requested vectors doubles until enough of them survive the
    boundary filter or the request reaches MAX_VECTORS.

    Returns:
        (interior values, interior vectors, boundary values below the last
        interior value kept).
    """
    n = M.shape[0]
    count = needed + EXTRA_VECTORS
    limit = n if n <= DENSE_LIMIT else min(n - 2, MAX_VECTORS)
    while True:
        values, vectors = _smallest_singular(M, count)
        interior, interior_vectors, boundary = _interior_modes(values, vectors, grid, expand)
        if interior.size >= needed or count >= limit:
            break
        count = min(2 * count, limit)
        logger.debug("Only %d interior singular values; requesting %d", interior.size, count)

    interior, interior_vectors = interior[:needed], interior_vectors[:, :needed]
    if interior.size:
        boundary = boundary[boundary < interior[-1]]
    return interior, interior_vectors, boundary


def _parity_bases(grid: Grid) -> Tuple[sp.csr_matrix, sp.csr_matrix]:
    n = grid.n_nodes
    c = grid.center
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    j = np.arange(1, c + 1)

    even_rows = np.concatenate(([c], c + j, c - j))
    even_cols = np.concatenate(([0], j, j))
    even_vals = np.concatenate(([1.0], np.full(c, inv_sqrt2), np.full(c, inv_sqrt2)))
    E = sp.csr_matrix((even_vals, (even_rows, even_cols)), shape=(n, c + 1))

    odd_rows = np.concatenate((c + j, c - j))
    odd_cols = np.concatenate((j - 1, j - 1))
    odd_vals = np.concatenate((np.full(c, inv_sqrt2), np.full(c, -inv_sqrt2)))
    O = sp.csr_matrix((odd_vals, (odd_rows, odd_cols)), shape=(n, c))
    return E, O


def parity_singular_values(spec: LinearOperatorSpec) -> Tuple[float, float, float]:
    """Smallest singular values on even and odd S in the symmetric weight e^{a|x|}.

    Returns:
        (even smallest, odd smallest, odd second smallest), boundary modes excluded.
    """
    M = second_order_matrix(spec, symmetric=True)
    E, O = _parity_bases(spec.grid)
    M_even = (E.T @ M @ E).tocsc()
    M_odd = (O.T @ M @ O).tocsc()

    even_values, _, _ = interior_singular(M_even, spec.grid, 1, expand=E)
    odd_values, _, _ = interior_singular(M_odd, spec.grid, 2, expand=O)

    if even_values.size < 1 or odd_values.size < 2:
        raise SpectralDomainError(
            f"Parity restrictions have {even_values.size} even and {odd_values.size} odd interior "
            f"singular values among the smallest {MAX_VECTORS}; widen the grid")
    return float(even_values[0]), float(odd_values[0]), float(odd_values[1])


def kernel_scan(spec: LinearOperatorSpec, threshold: float = 1e-4, q: int = 6,
                with_parity: bool = True) -> SpectralReport:
    """Near-kernel singular values of the weighted second-order matrix.

    A singular value counts as zero when it lies below threshold times the
    median of the q reported values and below ZERO_GAP times the next value;
    the kernel count is the number of leading zeros. A ratio of the second to
    the first value below GAP_RATIO marks the scan inconclusive.

    Args:
        spec: Linearization data with 0 < a < a_c.
        threshold: Relative size below which a singular value may count as zero.
        q: Number of interior singular values to report (at least 6).
        with_parity: Also compute the even/odd restrictions.

    Returns:
        SpectralReport with singular values, kernel count and kernel vector.
    """
    if q < 6:
        raise ConfigurationError(f"kernel_scan needs q >= 6, got {q}")
    grid = spec.grid
    M = second_order_matrix(spec)

    values, vectors, boundary = interior_singular(M, grid, q)
    if boundary.size:
        logger.info("Excluded %d boundary mode(s) concentrated at the truncation edge", boundary.size)
    if values.size < 2:
        raise SpectralDomainError("Too few interior singular values; widen the grid")

    scale = float(np.median(values))
    gap_ratio = float(values[1] / values[0])
    inconclusive = gap_ratio < GAP_RATIO
    small = 0
    while small < values.size - 1 and values[small] < threshold * scale:
        small += 1
    kernel_count = small if small and values[small - 1] < ZERO_GAP * values[small] else 0
    if inconclusive:
        logger.warning("Kernel scan inconclusive: gap ratio %.3g < %.0f; refine the grid",
                       gap_ratio, GAP_RATIO)

    S1, _ = wave_derivatives(spec.wave)
    G1 = np.exp(spec.a * grid.x) * S1
    kernel = vectors[:, 0].copy()
    overlap = float(np.dot(kernel, G1))
    correlation = abs(overlap) / (np.linalg.norm(kernel) * np.linalg.norm(G1))
    kernel *= math.copysign(np.linalg.norm(G1) / np.linalg.norm(kernel), overlap)

    a_c = a_crit(spec.c)
    report = SpectralReport(
        a=spec.a,
        c=spec.c,
        a_c=a_c,
        b_star=b_star(spec.c, spec.a),
        singular_values=[float(v) for v in values[:q]],
        boundary_modes=int(boundary.size),
        scale=scale,
        kernel_count=kernel_count,
        gap_ratio=gap_ratio,
        inconclusive=inconclusive,
        kernel_vector=kernel,
        kernel_correlation=float(correlation),
    )

    if with_parity:
        even_min, odd_min, odd_second = parity_singular_values(spec)
        report.even_min_sv = even_min
        report.odd_min_sv = odd_min
        report.odd_second_sv = odd_second
        report.even_invertible = bool(even_min > EVEN_ODD_RATIO * odd_second)

    logger.info("Kernel scan (a=%.4f, a_c=%.4f): sv=%s, count=%d, gap=%.3g",
                spec.a, a_c, np.array2string(values[:3], precision=3), kernel_count, gap_ratio)
    return report


def invert_nabla(F: np.ndarray, a: float, grid: Grid) -> np.ndarray:
    """Solve W(x + 1/2) - W(x - 1/2) = F(x) by W(x) = -sum_{j >= 0} F(x + 1/2 + j).

    The sum is truncated at the right edge of the grid; the identity holds
    exactly on nodes at least 1/2 from either edge.
    """
    if not a > 0.0:
        raise SpectralDomainError(f"nabla is only invertible in positive weights, got a={a}")
    F = np.asarray(F, dtype=float)
    scale = float(np.max(np.abs(F))) if F.size else 0.0
    tail = float(np.max(np.abs(F[-grid.unit_shift:])))
    if scale > 0.0 and tail > 1e-12 * scale:
        logger.warning("invert_nabla: F has not decayed at the right edge (|F| = %.3e)", tail)

    stride = grid.unit_shift
    G = np.empty_like(F)
    for r in range(stride):
        G[r::stride] = np.cumsum(F[r::stride][::-1])[::-1]
    return -shift(G, grid.half_shift)


def newton_polish(wave: WaveSolution, params: PotentialParams,
                  rtol: float = 1e-12, max_halvings: int = 6) -> WaveSolution:
    """One damped Newton pass on sigma V = A Phi'(A V), ||V||_2 = 1 - delta.

    The Jacobian is applied matrix-free and inverted with GMRES. The update is
    accepted only if it lowers the relative residual; otherwise the input
    wave is returned.
    """
    grid = wave.grid
    h = grid.h
    n = grid.n_nodes
    target = 1.0 - wave.delta
    V = wave.V
    sigma = wave.sigma
    Q = stiffness(params, wave.R)

    def jacobian(z: np.ndarray) -> np.ndarray:
        dV, dsigma = z[:n], z[n]
        out = np.empty(n + 1)
        out[:n] = sigma * dV + dsigma * V - box_average(Q * box_average(dV, grid, False), grid, False)
        out[n] = h * np.dot(V, dV)
        return out

    rhs = np.empty(n + 1)
    rhs[:n] = -(sigma * V - box_average(force(params, wave.R), grid, False))
    rhs[n] = -0.5 * (h * np.dot(V, V) - target ** 2)

    operator = LinearOperator((n + 1, n + 1), matvec=jacobian, dtype=float)
    step, info = gmres(operator, rhs, rtol=rtol, atol=0.0, restart=200, maxiter=20)
    if info != 0:
        logger.warning("newton_polish: GMRES stopped with info=%d", info)

    dV = 0.5 * (step[:n] + step[:n][::-1])
    best = wave
    t = 1.0
    for _ in range(max_halvings):
        candidate = V + t * dV
        candidate *= target / discrete_norm(candidate, h)
        R = box_average(candidate, grid, False)
        T = box_average(force(params, R), grid, False)
        new_sigma = discrete_norm(T, h) / target
        residual = discrete_norm(new_sigma * candidate - T, h) / new_sigma
        if residual < best.residual:
            eps = 1.0 - float(R[grid.center])
            best = wave.model_copy(update={
                "V": candidate,
                "R": R,
                "sigma": new_sigma,
                "eps": eps,
                "mu": math.sqrt(new_sigma * eps ** (wave.m + 2.0)),
                "p": float(trapezoid(potential(params, R), dx=h)),
                "residual": residual,
            })
            break
        t *= 0.5

    if best is wave:
        logger.info("newton_polish rejected: residual stays at %.3e", wave.residual)
    else:
        logger.info("newton_polish accepted: residual %.3e -> %.3e", wave.residual, best.residual)
    return best


def jordan_check(wave_lo: WaveSolution, wave: WaveSolution, wave_hi: WaveSolution,
                 params: PotentialParams) -> JordanReport:
    """Verify L(S2, W2) = (0, -(sigma'/sigma) W1) with delta-derivatives by central differences."""
    if not (wave_lo.grid == wave.grid == wave_hi.grid):
        raise ConfigurationError("jordan_check needs three waves on the same grid")
    if not wave_lo.delta < wave.delta < wave_hi.delta:
        raise ConfigurationError("jordan_check needs delta_lo < delta < delta_hi")

    span = wave_hi.delta - wave_lo.delta
    S2 = (wave_hi.R - wave_lo.R) / span
    W2 = (wave_hi.V - wave_lo.V) / span
    sigma_prime = (wave_hi.sigma - wave_lo.sigma) / span

    spec = build_operator_spec(wave, params, a=0.0)
    first, second = apply_L(spec, S2, W2)
    _, W1 = wave_derivatives(wave)
    expected = -(sigma_prime / wave.sigma) * W1

    h = wave.grid.h
    reference = discrete_norm(expected, h)
    return JordanReport(
        delta=wave.delta,
        sigma_prime=sigma_prime,
        first_row_norm=discrete_norm(first, h) / reference,
        second_row_mismatch=discrete_norm(second - expected, h) / reference,
    )


def kernel_verdict_stability(params: PotentialParams, delta: float, grid: Grid,
                             fractions: Sequence[float] = (0.25, 0.5, 0.75),
                             extra_width: float = 2.0, tol: float = 1e-8,
                             max_iter: int = 20000,
                             wave: Optional[WaveSolution] = None) -> VerdictStability:
    """Kernel counts for a in fractions * a_c and on a domain widened by extra_width."""
    if wave is None:
        wave = solve_wave(params, delta, grid, tol, max_iter)
    counts = []
    for fraction in fractions:
        spec = build_operator_spec(wave, params, a_fraction=fraction)
        counts.append(kernel_scan(spec, with_parity=False).kernel_count)

    wide_grid = grid.widened(extra_width)
    wide_wave = solve_wave(params, delta, wide_grid, tol, max_iter)
    wide_count = kernel_scan(build_operator_spec(wide_wave, params), with_parity=False).kernel_count

    stable = len(set(counts + [wide_count])) == 1
    if not stable:
        logger.warning("Kernel verdict changes across weights/domains: %s, widened %d", counts, wide_count)
    return VerdictStability(
        delta=delta,
        fractions=list(fractions),
        counts=counts,
        widened_half_width=wide_grid.half_width,
        widened_count=wide_count,
        stable=stable,
    )
