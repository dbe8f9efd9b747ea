import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from explicit_zeta.core_numerics import sieve_tables, zeta_reference
from explicit_zeta.errors import ArgumentError, BudgetError, ConstraintError, DomainError
from explicit_zeta.zero_density import (
    H0, LAMBDA_HAT, SIGMA1_H0, MollifierContext, arg_phi_bound, argument_bound_b3, b1,
    count_sign_changes, cumulative_coefficient, density_bound_eval, density_coefficients,
    density_consistency_check, epsilon_window, gcd_double_sum, h_function, lambda_hat_empirical,
    mollified_zeta, mollifier_lambda, mollifier_lambda_double_sum, phi_moment_bound, rvm_envelope,
    gcd_sum_majorant, truncated_sigma_max, zero_count_empirical,
)

TABLES = sieve_tables(2000)


def zeta2(sigma):
    return float(mpmath.zeta(2 * sigma))


# --- mollifier ---------------------------------------------------------------

@pytest.mark.parametrize("X", [1, 2, 7.5, 100])
def test_lambda_one(X):
    assert mollifier_lambda(1, X, 0.6, TABLES) == pytest.approx(1.0, rel=1e-14)


def test_lambda_forms_agree():
    ctx = MollifierContext.build(20, 0.6, TABLES)
    for n in range(1, 21):
        assert ctx(n) == pytest.approx(mollifier_lambda_double_sum(n, 20, 0.6, TABLES), abs=1e-12)


def test_lambda_support():
    assert mollifier_lambda(21, 20, 0.6, TABLES) == 0.0
    assert MollifierContext.build(20, 0.6, TABLES)(4) == 0.0      # square factor


def test_lambda_growth_at_100():
    ctx = MollifierContext.build(100, 0.5, TABLES)
    assert np.max(np.abs(ctx.lam[2:])) <= 2.2 * math.log(100)


@pytest.mark.parametrize("sigma", [0.55, 0.6, 0.75])
def test_lambda_envelopes(sigma):
    ctx = MollifierContext.build(300, sigma, TABLES)
    n = np.arange(1, 301)
    cap = n ** (2 * sigma) / TABLES.phi_x_array(2 * sigma)[1:301]
    assert np.all(np.abs(ctx.lam[1:]) <= cap * (1 + 1e-12))
    assert np.all(np.abs(ctx.lam[1:]) <= zeta2(sigma))


def test_mollifier_rejections():
    with pytest.raises(DomainError):
        MollifierContext.build(0.5, 0.6)
    with pytest.raises(DomainError):
        MollifierContext.build(10, 0.4)
    with pytest.raises(DomainError):
        MollifierContext.build(10, 0.6)(0)


def test_lambda_hat_constant():
    assert LAMBDA_HAT == 2.2
    for X in (8, 30, 100, 1000):
        assert lambda_hat_empirical(X, 0.5, TABLES) <= LAMBDA_HAT


# --- gcd sums ----------------------------------------------------------------

def test_gcd_sum_single_term():
    assert gcd_double_sum(1, 0.6) == pytest.approx(1.0)


@pytest.mark.parametrize("X", [5, 10, 30, 100])
@pytest.mark.parametrize("sigma", [0.55, 0.6, 0.75])
def test_gcd_sum_closed_form(X, sigma):
    ctx = MollifierContext.build(X, sigma, TABLES)
    assert gcd_double_sum(X, sigma, tables=TABLES) == pytest.approx(1 / ctx.normalizer, rel=1e-10)


def test_gcd_sum_closed_form_by_hand():
    # normalizer summed directly from the Moebius and Jordan-type totient values
    norm = math.fsum(float(TABLES.mu[k]) ** 2 / TABLES.phi_x(k, 1.2) for k in range(1, 31))
    assert gcd_double_sum(30, 0.6, tables=TABLES) == pytest.approx(1 / norm, rel=1e-10)


def test_gcd_sum_second_form_positive():
    assert gcd_double_sum(50, 0.55, "2-2s", TABLES) > 0


def test_gcd_sum_guards():
    with pytest.raises(BudgetError):
        gcd_double_sum(2e4, 0.6)
    with pytest.raises(ArgumentError):
        gcd_double_sum(10, 0.6, "other")


def test_gcd_sum_majorant_at_100():
    lhs = zeta2(0.72) * gcd_double_sum(100, 0.72, tables=TABLES)
    assert lhs <= gcd_sum_majorant(0.72, 100)


def test_gcd_sum_majorant_grid():
    for X in (5, 10, 30, 100):
        for sigma in (0.55, 0.6, 0.75):
            if sigma < 0.5 + 1 / math.log(X):
                continue
            closed = 1 / MollifierContext.build(X, sigma, TABLES).normalizer
            assert zeta2(sigma) * closed <= gcd_sum_majorant(sigma, X)


def test_gcd_sum_majorant_limits_and_edges():
    assert gcd_sum_majorant(0.7, 1e12) == pytest.approx(1.0, abs=1e-4)
    edge = 0.5 + 1 / math.log(50)
    assert gcd_sum_majorant(edge, 50) > 1
    with pytest.raises(DomainError):
        gcd_sum_majorant(0.55, 10)
    with pytest.raises(DomainError):
        gcd_sum_majorant(0.9, 1)


# --- mollified moment ----------------------------------------------------------

def test_epsilon_window_value():
    assert epsilon_window(0.6, math.exp(61)) == pytest.approx(1 / 6 - 1 / 6.1)
    assert epsilon_window(0.6, math.exp(61)) == pytest.approx(0.00273, abs=1e-5)


def test_epsilon_window_gate():
    T0 = math.exp(61)
    with pytest.raises(ConstraintError):
        phi_moment_bound(0.6, T0, 0.003, T0)
    assert phi_moment_bound(0.6, T0, 0.0027, T0).phi > 0


def test_phi_rejections():
    with pytest.raises(ArgumentError):
        phi_moment_bound(0.6, math.exp(50), 0.001, math.exp(50))
    with pytest.raises(ArgumentError):
        phi_moment_bound(1.2, 1e30, 0.001, 1e30)


def test_phi_decreasing_in_T():
    s0 = 0.5 + 8 / math.log(H0)
    vals = [phi_moment_bound(s0, H0, 1 / 24, T, S1=219.6, S2=611.6).phi for T in np.geomspace(H0, 1e40, 30)]
    assert all(v > 0 for v in vals)
    assert all(np.diff(vals) < 0)


# --- argument bounds -----------------------------------------------------------

def test_h_function_oracle():
    z = mpmath.zeta
    ref = (2 * z(2.4) + mpmath.mpf(1.5) ** -2.4 - 1) * (1 + z(2.4) * z(4.8))
    assert h_function(2.4) == pytest.approx(float(ref), rel=1e-13)


def test_b1_positive_decreasing():
    vals = [b1(s) for s in np.linspace(2.4, 3.0, 61)]
    assert all(v > 0 for v in vals) and all(np.diff(vals) < 0)


def test_real_part_gap_positive():
    assert 1 - 2**-2.4 * h_function(2.4) > 0


def test_argument_bound_domains():
    with pytest.raises(ArgumentError):
        argument_bound_b3(2.3, H0)
    with pytest.raises(ArgumentError):
        argument_bound_b3(2.4, 3.0)
    with pytest.raises(DomainError):
        arg_phi_bound(2.0, 2.4)
    assert math.isfinite(argument_bound_b3(SIGMA1_H0, H0))


@pytest.mark.parametrize("t", [10.0, 100.0])
def test_mollified_zeta_near_one(t):
    s = complex(3, t)
    phi = mollified_zeta(s, 50)
    assert abs(phi - 1) <= 2**-3 * h_function(2.4)
    assert abs(math.atan2(phi.imag, phi.real)) <= arg_phi_bound(3.0, 2.4)


def test_mollified_zeta_uses_oracle():
    s = complex(3, 10)
    ctx = MollifierContext.build(50, 3.0)
    sx = sum(ctx(n) * n**-s for n in range(1, 51))
    assert mollified_zeta(s, 50) == pytest.approx(complex(zeta_reference(s)) * sx, rel=1e-12)


# --- density constants ------------------------------------------------------------

@pytest.fixture(scope="module")
def coeffs_h0():
    return density_coefficients()


def test_density_coefficients_h0(coeffs_h0):
    c = coeffs_h0
    assert c.alpha < 15291.986
    assert c.beta < 4.416 and c.gamma_c < 0.6881 and c.delta < 0
    assert c.rounded() == {"a": 10395.2, "b": 1.104, "c": 0.173, "d": 0.51}


def test_density_assembly_identities(coeffs_h0):
    c = coeffs_h0
    assert c.b == c.beta / 4 and c.c == c.gamma_c / 4
    assert c.d == max(c.delta / 4, 0) + 0.51
    e = math.e
    assert c.a == pytest.approx(e / 4 * (2 * e * e / math.pi + c.alpha))
    assert c.beta == pytest.approx((SIGMA1_H0 - 0.5) * (9 * SIGMA1_H0 + 4) / (16 * math.log(2)))


def test_density_coefficients_1e50():
    c = density_coefficients(1e50, 2.4)
    assert c.a <= 5.357 and c.alpha < 3.18


@pytest.mark.parametrize("T0", [math.exp(24), H0, 1e20, 1e50])
def test_coefficient_floor(T0):
    c = density_coefficients(T0, 2.4)
    assert c.floor > 3.259
    assert c.a > c.floor


def test_density_coefficient_rejections():
    with pytest.raises(ArgumentError):
        density_coefficients(1e9)
    with pytest.raises(ArgumentError):
        density_coefficients(H0, 2.3)


def test_truncated_sigma_max():
    assert truncated_sigma_max(H0) == 0.831


def test_cumulative_coefficient(coeffs_h0):
    assert cumulative_coefficient(coeffs_h0) == 10395.21
    got = density_bound_eval(0.6, 1e12, coeffs_h0, "cumulative")
    assert got == pytest.approx(10395.21 / (2**0.975 - 1) * 1e12**0.975 * math.log(5e11))


def test_dyadic_plug_in(coeffs_h0):
    L = math.log(H0)
    ref = 10395.2 * H0 * L + 1.104 * L * L + 0.173 * L * math.log(L) + 0.51 * L
    assert density_bound_eval(0.5, H0, coeffs_h0) == pytest.approx(ref, rel=1e-14)


def test_density_bound_monotone_in_sigma(coeffs_h0):
    assert density_bound_eval(0.75, 1e12, coeffs_h0) < density_bound_eval(0.55, 1e12, coeffs_h0)


@settings(max_examples=50)
@given(s1=st.floats(0.5, 0.831), s2=st.floats(0.5, 0.831), T=st.floats(H0, 1e30))
def test_density_bound_monotone_property(coeffs_h0, s1, s2, T):
    lo, hi = sorted((s1, s2))
    assert density_bound_eval(hi, T, coeffs_h0) <= density_bound_eval(lo, T, coeffs_h0)


def test_density_bound_domains(coeffs_h0):
    with pytest.raises(DomainError):
        density_bound_eval(0.9, 1e12, coeffs_h0)
    with pytest.raises(DomainError):
        density_bound_eval(0.6, 1e9, coeffs_h0)
    with pytest.raises(DomainError):
        density_bound_eval(0.6, H0, coeffs_h0, "cumulative")
    with pytest.raises(ArgumentError):
        density_bound_eval(0.6, 1e12, coeffs_h0, "other")
    with pytest.raises(DomainError):
        density_bound_eval(0.6, 1e60, density_coefficients(1e50, 2.4), "cumulative")


# --- zero counting ----------------------------------------------------------------

def test_rvm_envelope_formula():
    T = 100.0
    main = T / (2 * math.pi) * math.log(T / (2 * math.pi * math.e)) + 7 / 8
    r = 0.11 * math.log(T) + 0.29 * math.log(math.log(T)) + 2.29 + 0.2 / T
    assert rvm_envelope(T) == pytest.approx((main - r, main + r))


def test_zero_count_20():
    assert zero_count_empirical(20.0)[0] == 1


def test_zero_count_100():
    assert zero_count_empirical(100.0)[0] == 29


def test_zero_count_agrees_with_mpmath():
    # mpmath.nzeros counts zeros up to height T via Gram blocks, a separate route
    for T in (50.0, 200.0):
        assert count_sign_changes(T, refine=2) == mpmath.nzeros(T)


@pytest.mark.parametrize("T", [30.0, 50.0, 100.0, 500.0, 1000.0, 5000.0])
def test_zero_count_in_window(T):
    n, lo, hi = zero_count_empirical(T)
    assert lo <= n <= hi


def test_zero_count_domain():
    with pytest.raises(DomainError):
        zero_count_empirical(2.0)
    with pytest.raises(DomainError):
        zero_count_empirical(2e5)


@pytest.mark.parametrize("sigma,T", [(0.6, 1e4), (0.55, 5e4), (0.831, 1e3)])
def test_density_consistency(sigma, T):
    assert density_consistency_check(sigma, T)


def test_density_consistency_domain():
    with pytest.raises(DomainError):
        density_consistency_check(0.5, 1e3)
