import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gl3arch import rep_theory as rt
from gl3arch.gamma_engine import gamma_rational_part
from gl3arch.mellin_barnes import QuadratureError
from gl3arch.zeta_verify import (QuadConfig, adjoint_cohomology_pairing, adjoint_target_expr, adjoint_target_via_l,
                                 central_sign, critical_set, criticality_check, expected_nonvanishing,
                                 reconstruct_rational, reflected_terms, rs_cohomology_pairing,
                                 rs_convergence_abscissa, rs_membership_exponent, rs_terms, rs_zeta)


@given(st.fractions(min_value=-1000, max_value=1000, max_denominator=1000))
def test_reconstruction_recovers_rationals(q):
    rec = reconstruct_rational(complex(float(q), 0.0))
    assert rec.ok and rec.rational == q


@given(st.fractions(min_value=1, max_value=100, max_denominator=50))
def test_reconstruction_rejects_imaginary_values(q):
    assert not reconstruct_rational(complex(0.0, float(q))).ok


def test_reconstruction_rejects_irrationals():
    assert not reconstruct_rational(math.pi, max_denominator=100, tol=1e-8).ok


@pytest.mark.parametrize("ell,value", [(3, Fraction(-2, 35)), (5, Fraction(-8, 231))])
def test_adjoint_target_is_rational_times_pi_power(ell, value):
    d = gamma_rational_part(adjoint_target_expr(ell))
    assert d.rational == value and d.pi_exponent == -(2 * ell + 1)
    assert not d.sqrt_pi_parity and not d.sqrt2_parity
    assert adjoint_target_via_l(ell) == pytest.approx(float(d), rel=1e-13)


@pytest.mark.parametrize("ell,value", [(3, -32), (5, -384)])
def test_adjoint_membership_from_oracle(ell, value):
    numeric = float(gamma_rational_part(adjoint_target_expr(ell))) * (1 + 1e-9)
    rep = adjoint_cohomology_pairing(ell, numeric=numeric)
    assert rep.ok and rep.reconstruction.rational == value


def test_critical_set_and_exponents():
    assert critical_set(5, 3, 0, 1) == [-1, 0]
    assert rs_membership_exponent(5, 3, 0, 1, 0) - rs_membership_exponent(5, 3, 0, 1, -1) == 3


@pytest.mark.parametrize("ell,kappa,w_pi", [(5, 3, 1), (7, 3, 1), (7, 5, 1), (5, 2, 0), (7, 4, 0)])
def test_criticality_matches_branching(ell, kappa, w_pi):
    assert criticality_check(ell, kappa, 0, w_pi, 6).ok


def test_reflected_terms_equal_signed_original():
    for eps in (1, -1):
        ref = reflected_terms(5, 3, 0, eps)
        orig = rs_terms(5, 3)
        # diag(-1, 1, 1) acting on W_(l; -kappa) gives (-1)^{w/2} eps W_(l; kappa)
        sgn = eps
        assert central_sign(0, eps) == -eps
        assert set(ref) == set(orig)
        assert all(ref[j] == sgn * orig[j] for j in orig)


def test_convergence_abscissa():
    assert rs_convergence_abscissa(5, 3) < 1.5
    assert rs_convergence_abscissa(7, 5) < 1.5


def test_rs_zeta_rejects_parity_violation():
    with pytest.raises(ValueError):
        rs_zeta(5, 3, 0, 0)


def test_rs_zeta_outside_convergence_region():
    with pytest.raises(ValueError):
        rs_zeta(5, 3, s=-3.0)


def test_rs_zeta_small_window_is_a_quadrature_failure():
    quad = QuadConfig(u1=(-1.0, 1.0), u2=(-1.0, 1.0), max_widenings=0)
    with pytest.raises(QuadratureError):
        rs_zeta(5, 3, s=1.5, quad=quad, symmetry=False, contour_check=False)


@pytest.mark.parametrize("m", [-1, 0])
@pytest.mark.parametrize("eps", [1, -1])
@pytest.mark.parametrize("sign", [1, -1])
def test_sign_vanishing_pattern(m, eps, sign):
    rep = rs_cohomology_pairing(5, 3, 0, 1, eps, m, sign, crosscheck=False)
    assert rep.vanishes == (not expected_nonvanishing(m, eps, sign))
    if not rep.vanishes:
        exact = rep.diagnostics["exact_scaled"]
        assert rep.diagnostics["exact_vs_numeric"] < 1e-12
        # the scaled value is a nonzero Gaussian rational on the imaginary axis
        assert exact.re == 0 and exact.im != 0


def test_rs_pairing_rejects_noncritical():
    with pytest.raises(ValueError):
        rs_cohomology_pairing(5, 3, 0, 1, 1, 2, 1, crosscheck=False)


def test_combinatorial_factor_nonzero_on_critical_set():
    for m in critical_set(5, 3, 0, 1):
        assert rt.combinatorial_pairing_rs(5, 3, 0, 1, m, 1).value != 0
