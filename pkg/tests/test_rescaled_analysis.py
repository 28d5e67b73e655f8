"""Tests for the rescaled kernel analysis and the Green's function estimates.

For m = 2 the limit potential is P(xt) = 1.5 (1 + xt^2)^-2 and the pair of
solutions of T'' = -2 P T is known in closed form:

    T_o = xt / sqrt(1 + xt^2),   T_e = (xt^2 - 1) / sqrt(1 + xt^2).

Author: FPU Waves maintainers
Created: 2026-10-17
Version: 1.0.0
License: MIT
"""

import numpy as np
import pytest

from solvers.rescaled_analysis import (
    asymptotic_ode_residuals,
    build_P_tilde,
    commutation_gap,
    fit_order,
    green_convolve,
    green_residual,
    lemma4_bounds,
    odd_certificate,
    rescale_and_fit,
    rescaling_length,
    solve_T_pair,
    weighted_laplacian,
)
from solvers.stencils import discrete_norm, first_derivative
from utils.errors import ConfigurationError


@pytest.fixture(scope="module")
def pair(ode):
    """T pair on [-10, 10]."""
    return solve_T_pair(ode, np.arange(-1000, 1001) / 100.0)


@pytest.fixture(scope="module")
def rescaled(wave_02, scan_02, ode, params):
    """Rescaled fit of the delta = 0.2 kernel."""
    return rescale_and_fit(wave_02, scan_02.kernel_vector, ode, scan_02.a, params)


def test_P_tilde_closed_form(ode):
    """P(0) = m(m+1)/4 and the m = 2 closed form."""
    xt = np.arange(-300, 301) / 10.0
    P = build_P_tilde(ode, xt)
    assert P[300] == pytest.approx(1.5, rel=1e-12)
    np.testing.assert_allclose(P, 1.5 / (1.0 + xt ** 2) ** 2, rtol=1e-8)
    np.testing.assert_array_equal(P, P[::-1])


def test_P_tilde_decay_rate(ode):
    """log-log slope -(m + 2) at large arguments."""
    xt = np.array([40.0, 80.0, 160.0])
    slope = np.polyfit(np.log(xt), np.log(build_P_tilde(ode, xt)), 1)[0]
    assert slope == pytest.approx(-4.0, abs=0.1)


def test_odd_certificate(ode):
    """S_bar' / mu_bar solves the limit equation on the table."""
    assert odd_certificate(ode) <= 1e-6


def test_T_pair_closed_form(pair):
    """Both solutions match their closed forms."""
    xt = pair.xt
    root = np.sqrt(1.0 + xt ** 2)
    np.testing.assert_allclose(pair.To, xt / root, atol=1e-8)
    np.testing.assert_allclose(pair.Te, (xt ** 2 - 1.0) / root, atol=1e-6)
    assert pair.Te[1000] == pytest.approx(-1.0, abs=1e-6)
    assert pair.dTo[1000] == pytest.approx(1.0, abs=1e-12)


def test_T_pair_wronskian(pair):
    """Te To' - Te' To = -2/m, constant in xt."""
    assert pair.wronskian == pytest.approx(-1.0, abs=1e-7)
    assert pair.wronskian_spread <= 1e-7
    assert pair.limit_slope == pytest.approx(pair.wronskian_slope, abs=1e-6)
    assert pair.wronskian_slope == -1.0


def test_T_pair_parity(pair):
    """T_e is even, T_o is odd."""
    np.testing.assert_allclose(pair.Te, pair.Te[::-1], atol=1e-14)
    np.testing.assert_allclose(pair.To, -pair.To[::-1], atol=1e-14)


def test_T_pair_tail_bounds(pair):
    """Affine and slope bounds of the limit solutions stay finite and small."""
    assert pair.even_affine_bound <= 1.5
    assert pair.even_slope_bound <= 3.0
    assert pair.odd_slope_bound <= 1.5
    assert abs(pair.odd_tail) < 1e-4


def test_green_convolve_zero():
    """Zero forcing gives zero."""
    np.testing.assert_array_equal(green_convolve(np.zeros(101), 0.2, 1.0, 0.1), np.zeros(101))


def test_green_convolve_linear():
    """The solution operator is linear."""
    xt = np.arange(-400, 401) * 0.05
    F = np.exp(-xt ** 2)
    G = np.sin(xt) * np.exp(-0.5 * xt ** 2)
    combined = green_convolve(2.0 * F - 3.0 * G, 0.2, 1.0, 0.05)
    separate = 2.0 * green_convolve(F, 0.2, 1.0, 0.05) - 3.0 * green_convolve(G, 0.2, 1.0, 0.05)
    np.testing.assert_allclose(combined, separate, atol=1e-10 * np.max(np.abs(separate)))


def test_green_convolve_methods_agree():
    """Direct and FFT convolution give the same result."""
    xt = np.arange(-200, 201) * 0.05
    F = np.exp(-xt ** 2)
    direct = green_convolve(F, 0.3, 1.0, 0.05, method="direct")
    fft = green_convolve(F, 0.3, 1.0, 0.05, method="fft")
    np.testing.assert_allclose(fft, direct, atol=1e-10 * np.max(np.abs(direct)))


def test_green_residual_second_order():
    """(d/dxt - b)^2 u = F up to O(ht^2)."""

    def worst(ht):
        n = int(round(30.0 / ht))
        xt = np.arange(-n, n + 1) * ht
        F = np.exp(-xt ** 2)
        u = green_convolve(F, 0.2, 1.0, ht)
        return np.max(np.abs(green_residual(u, F, 0.2, 1.0, ht)))

    coarse, fine = worst(0.05), worst(0.025)
    assert coarse < 1e-2
    assert coarse / fine >= 3.0


def test_commutation_exact():
    """H * (Delta F) equals (Delta H) * F to rounding."""
    ht = 0.05
    delta = 0.25
    xt = np.arange(-960, 961) * ht
    F = np.exp(-0.5 * xt ** 2) * (1.0 + 0.3 * xt)
    assert commutation_gap(F, delta, 1.0, ht, int(round(1.0 / (delta * ht)))) <= 1e-12


def test_weighted_laplacian_zero_fill():
    """Entries are zero-filled beyond the grid."""
    F = np.ones(10)
    out = weighted_laplacian(F, 3, 0.5)
    assert out[0] == pytest.approx(np.exp(-0.5) - 2.0)
    assert out[-1] == pytest.approx(np.exp(0.5) - 2.0)
    assert out[5] == pytest.approx(np.exp(-0.5) + np.exp(0.5) - 2.0)


def test_lemma4_bounds_uniform():
    """Constants stay bounded as delta halves; commutation holds."""
    report = lemma4_bounds([0.2, 0.4], trials=3, a=0.5)
    assert report.deltas == [0.4, 0.2]
    assert report.passed
    assert set(report.constants) == {"l2_chain", "sup_l2", "sup_l1"}
    assert all(len(values) == 2 for values in report.constants.values())
    assert max(report.commutation_gap) <= 1e-12


def test_lemma4_bounds_deterministic():
    """Same seed, same constants."""
    first = lemma4_bounds([0.4], trials=2, seed=3)
    second = lemma4_bounds([0.4], trials=2, seed=3)
    assert first.constants == second.constants


def test_lemma4_bounds_needs_input():
    """An empty delta list is a configuration error."""
    with pytest.raises(ConfigurationError):
        lemma4_bounds([], trials=2)


def test_rescaling_length(wave_02, ode):
    """ell = mu / mu_bar or ell = delta."""
    assert rescaling_length(wave_02, ode.mu_bar) == pytest.approx(wave_02.mu / ode.mu_bar)
    assert rescaling_length(wave_02, ode.mu_bar, "delta") == 0.2
    with pytest.raises(ConfigurationError):
        rescaling_length(wave_02, ode.mu_bar, "eps")


def test_rescaled_normalization(rescaled):
    """|G(0)| + ||P G||_1 + ||P G||_2 = 1 and St'(0) > 0."""
    ht = float(rescaled.xt[1] - rescaled.xt[0])
    c = rescaled.xt.size // 2
    PG = rescaled.Pt * rescaled.Gt
    total = abs(rescaled.Gt[c]) + ht * np.sum(np.abs(PG)) + discrete_norm(PG, ht)
    assert total == pytest.approx(1.0, rel=1e-12)
    assert first_derivative(rescaled.St, ht)[c] > 0.0


def test_rescaled_kernel_is_odd(rescaled):
    """The kernel is fitted by the odd limit solution."""
    assert rescaled.c_o > 0.0
    assert abs(rescaled.c_e) < 0.05 * rescaled.c_o
    assert rescaled.ell_mode == "mu"
    assert rescaled.Z_inf > 0.0 and rescaled.Z_inf_delta > 0.0
    assert np.isfinite(rescaled.fp_residual)
    assert set(rescaled.columns()) == {"xt", "St", "Te", "To", "Pt", "Zt"}


def test_rescale_rejects_wrong_shape(wave_02, ode, params):
    """The kernel vector must live on the wave grid."""
    with pytest.raises(ConfigurationError):
        rescale_and_fit(wave_02, np.ones(7), ode, 1.0, params)


def test_asymptotic_residuals(rescaled, wave_02):
    """Error terms are finite; samples are kept on request."""
    terms = asymptotic_ode_residuals(rescaled, wave_02.grid.unit_shift, keep_samples=True)
    assert terms.int0 >= 0.0 and terms.int1 >= 0.0
    assert np.isfinite(terms.sup_E0) and np.isfinite(terms.sup_Eplus)
    assert terms.E0.shape == terms.Eplus.shape
    assert asymptotic_ode_residuals(rescaled, wave_02.grid.unit_shift).E0 is None


def test_fit_order():
    """Slope of a power law; nan for non-positive values."""
    assert fit_order([0.1, 0.2, 0.4], [0.01, 0.04, 0.16]) == pytest.approx(2.0)
    assert np.isnan(fit_order([0.1, 0.2], [0.0, 1.0]))
    assert np.isnan(fit_order([0.1], [1.0]))
