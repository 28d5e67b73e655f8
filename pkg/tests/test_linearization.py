"""Tests for the linearized operator, its essential spectrum and the kernel scan.

Author: FPU Waves maintainers
Created: 2026-10-17
Version: 1.0.0
License: MIT
"""

import math

import numpy as np
import pytest

from models.wave_solution import Grid
from solvers.linearization import (
    _parity_bases,
    a_crit,
    apply_L,
    b_star,
    build_operator_spec,
    continuous_symbol,
    discrete_symbol,
    edge_band,
    essential_spectrum,
    invert_nabla,
    jordan_check,
    kernel_scan,
    kernel_verdict_stability,
    nabla_half,
    newton_polish,
    second_order_matrix,
)
from solvers.stencils import discrete_norm
from solvers.wave_solver import solve_wave, wave_derivatives
from utils.errors import ConfigurationError, SpectralDomainError


def test_a_crit_closed_form():
    """sinh(a/2)/(a/2) = sinh(1) at a = 2."""
    assert a_crit(math.sinh(1.0)) == pytest.approx(2.0, abs=1e-12)


@pytest.mark.parametrize("c", [1.01, 1.5, 3.0, 30.0])
def test_a_crit_root(c):
    """The returned weight solves the defining equation."""
    a = a_crit(c)
    assert a > 0.0
    assert math.sinh(0.5 * a) / (0.5 * a) == pytest.approx(c, rel=1e-12)
    assert b_star(c, a) == pytest.approx(0.0, abs=1e-10 * a)


def test_a_crit_increases_with_speed():
    """Faster waves allow heavier weights."""
    speeds = [1.01, 1.1, 1.5, 2.0, 5.0, 30.0]
    weights = [a_crit(c) for c in speeds]
    assert all(later > earlier for earlier, later in zip(weights, weights[1:]))


def test_a_crit_subsonic():
    """No critical weight for c <= 1."""
    with pytest.raises(SpectralDomainError):
        a_crit(1.0)


def test_b_star_sign():
    """b_star vanishes at 0 and is positive strictly inside (0, a_c)."""
    c = 2.0
    assert b_star(c, 0.0) == 0.0
    assert b_star(c, 0.5 * a_crit(c)) > 0.0


def test_essential_spectrum_margin():
    """The rightmost curve point is -b_star, on the real axis."""
    c = 2.0
    a = 0.5 * a_crit(c)
    report = essential_spectrum(c, a, nk=801)
    assert report.max_real_part == pytest.approx(-report.b_star, abs=1e-12)
    assert report.max_real_part < 0.0
    assert len(report.k) == 801
    assert set(report.curve_columns()) == {"k", "reP_plus", "imP_plus", "reP_minus", "imP_minus"}


def test_essential_spectrum_domain():
    """Subsonic speeds and negative weights are rejected."""
    with pytest.raises(SpectralDomainError):
        essential_spectrum(0.9, 0.1)
    with pytest.raises(ConfigurationError):
        essential_spectrum(2.0, -0.1)


def test_discrete_symbol_consistent():
    """The interior-row symbol converges to the continuous one as h -> 0."""
    for k in (0.0, 1.0, 3.0):
        exact = continuous_symbol(k, 0.7, 4.0, 1.0)
        approx = discrete_symbol(k, 0.7, 1e-3, 4.0, 1.0)
        assert abs(approx - exact) <= 1e-5 * max(1.0, abs(exact))


def test_operator_needs_subcritical_weight(wave_02, params):
    """a >= a_c is refused when assembling the weighted matrix."""
    spec = build_operator_spec(wave_02, params, a=1.01 * a_crit(wave_02.speed))
    with pytest.raises(SpectralDomainError):
        second_order_matrix(spec)


def test_nabla_half_of_constant(grid):
    """nabla of a constant vanishes away from the edges."""
    F = np.ones(grid.n_nodes)
    K = grid.half_shift
    assert np.all(nabla_half(F, grid)[K:-K] == 0.0)


def test_invert_nabla(grid):
    """nabla(invert_nabla(F)) = F at nodes at least 1/2 from the edges."""
    x = grid.x
    F = np.exp(-4.0 * x ** 2) * (1.0 + x)
    W = invert_nabla(F, 0.5, grid)
    K = grid.half_shift
    np.testing.assert_allclose(nabla_half(W, grid)[K:-K], F[K:-K], atol=1e-12)
    with pytest.raises(SpectralDomainError):
        invert_nabla(F, 0.0, grid)


def test_translation_mode_residual_shrinks(wave_02, params):
    """||L(R', V')|| decays at least 3x when h is halved."""

    def residual(wave):
        S1, W1 = wave_derivatives(wave)
        first, second = apply_L(build_operator_spec(wave, params, a=0.0), S1, W1)
        h = wave.grid.h
        inner = np.abs(wave.grid.x) <= wave.grid.half_width - 1.0
        return np.hypot(discrete_norm(first[inner], h), discrete_norm(second[inner], h))

    fine = solve_wave(params, 0.2, wave_02.grid.refined())
    assert residual(wave_02) / residual(fine) >= 3.0


def test_kernel_scan_single_kernel(scan_02):
    """One-dimensional kernel spanned by the weighted translation mode."""
    assert scan_02.kernel_count == 1
    assert not scan_02.inconclusive
    assert scan_02.gap_ratio >= 100.0
    assert scan_02.singular_values[0] < 1e-4 * scan_02.scale
    assert scan_02.singular_values[0] < 0.1 * scan_02.singular_values[1]
    assert len(scan_02.singular_values) == 6
    assert scan_02.singular_values == sorted(scan_02.singular_values)
    assert scan_02.kernel_correlation >= 0.99


def test_kernel_scan_parity(scan_02):
    """The even restriction is invertible; the odd one carries the kernel."""
    assert scan_02.even_invertible
    assert scan_02.even_min_sv > 0.1 * scan_02.odd_second_sv
    assert scan_02.odd_min_sv < scan_02.even_min_sv
    assert scan_02.odd_second_sv > scan_02.odd_min_sv


def test_kernel_scan_needs_enough_values(wave_02, params):
    """q below 6 is rejected."""
    with pytest.raises(ConfigurationError):
        kernel_scan(build_operator_spec(wave_02, params), q=3)


def test_newton_polish_never_worse(wave_02, params):
    """The polished wave keeps the norm and does not raise the residual."""
    polished = newton_polish(wave_02, params)
    assert polished.residual <= wave_02.residual
    assert discrete_norm(polished.V, polished.grid.h) == pytest.approx(0.8, abs=1e-12)


def test_jordan_chain(params, grid, wave_02):
    """L(dR/d delta, dV/d delta) = (0, -(sigma'/sigma) V')."""
    lo = solve_wave(params, 0.19, grid)
    hi = solve_wave(params, 0.21, grid)
    report = jordan_check(lo, wave_02, hi, params)
    assert report.sigma_prime < 0.0
    assert report.first_row_norm < 0.1
    assert report.second_row_mismatch < 0.1


def test_jordan_chain_argument_order(params, wave_02, wave_01):
    """Deltas must bracket the center wave."""
    with pytest.raises(ConfigurationError):
        jordan_check(wave_02, wave_01, wave_02, params)


def test_kernel_verdict_on_wider_domain(params, grid, wave_02):
    """The kernel count is unchanged on a domain one unit wider."""
    verdict = kernel_verdict_stability(params, 0.2, grid, fractions=(0.5,), extra_width=1.0, wave=wave_02)
    assert verdict.counts == [1]
    assert verdict.widened_count == 1
    assert verdict.stable
    assert verdict.widened_half_width == grid.half_width + 1.0


def test_apply_L_is_linear(wave_02, params):
    """L(alpha a + beta b) = alpha L(a) + beta L(b)."""
    spec = build_operator_spec(wave_02, params)
    rng = np.random.default_rng(7)
    n = wave_02.grid.n_nodes
    S1, W1, S2, W2 = (rng.standard_normal(n) for _ in range(4))
    alpha, beta = 0.7, -2.3
    combined = apply_L(spec, alpha * S1 + beta * S2, alpha * W1 + beta * W2)
    first_1, second_1 = apply_L(spec, S1, W1)
    first_2, second_2 = apply_L(spec, S2, W2)
    np.testing.assert_allclose(combined[0], alpha * first_1 + beta * first_2, rtol=1e-10, atol=1e-8)
    np.testing.assert_allclose(combined[1], alpha * second_1 + beta * second_2, rtol=1e-10, atol=1e-8)


def test_apply_L_flips_parity(wave_02, params):
    """Even pairs map to odd pairs and odd pairs to even pairs."""
    spec = build_operator_spec(wave_02, params)
    x = wave_02.grid.x
    even_S, even_W = np.exp(-x ** 2), np.cos(x) * np.exp(-0.5 * x ** 2)
    odd_S, odd_W = x * np.exp(-x ** 2), np.sin(x) * np.exp(-0.5 * x ** 2)

    for out in apply_L(spec, even_S, even_W):
        np.testing.assert_allclose(out, -out[::-1], atol=1e-10 * np.max(np.abs(out)))
    for out in apply_L(spec, odd_S, odd_W):
        np.testing.assert_allclose(out, out[::-1], atol=1e-10 * np.max(np.abs(out)))


def test_parity_bases(grid):
    """Orthonormal even and odd bases that together span the grid functions."""
    E, O = _parity_bases(grid)
    E, O = E.toarray(), O.toarray()
    np.testing.assert_allclose(E.T @ E, np.eye(E.shape[1]), atol=1e-14)
    np.testing.assert_allclose(O.T @ O, np.eye(O.shape[1]), atol=1e-14)
    np.testing.assert_allclose(E.T @ O, 0.0, atol=1e-14)
    assert E.shape[1] + O.shape[1] == grid.n_nodes

    x = grid.x
    even, odd = np.exp(-x ** 2), x * np.exp(-x ** 2)
    np.testing.assert_allclose(E @ (E.T @ even), even, atol=1e-14)
    np.testing.assert_allclose(O @ (O.T @ odd), odd, atol=1e-14)
    np.testing.assert_allclose(O.T @ even, 0.0, atol=1e-14)
    np.testing.assert_allclose(E.T @ odd, 0.0, atol=1e-14)


def test_kernel_verdict_across_weights(params, grid, wave_02):
    """One kernel direction for a in {0.25, 0.5, 0.75} a_c and for X + 2."""
    verdict = kernel_verdict_stability(params, 0.2, grid, wave=wave_02)
    assert verdict.counts == [1, 1, 1]
    assert verdict.widened_count == 1
    assert verdict.stable
    assert verdict.widened_half_width == grid.half_width + 2.0


def test_edge_band_scales_with_width(grid):
    """Edge strips are 2 units wide on wide domains and a quarter of X on narrow ones."""
    assert edge_band(grid) == pytest.approx(1.0)
    assert edge_band(Grid(half_width=12, nodes_per_half=32)) == pytest.approx(2.0)


def test_parity_scan_on_narrow_grid(scan_02):
    """The narrow test grid leaves enough interior values for both parity blocks."""
    assert scan_02.even_min_sv is not None
    assert scan_02.odd_min_sv < 1e-2 * scan_02.odd_second_sv
