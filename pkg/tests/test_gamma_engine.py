import cmath
import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from gl3arch.gamma_engine import (GammaExpr, LFactorSpec, barnes_first, barnes_second, eval_gamma_C, eval_gamma_R,
                                  gamma_complex, gamma_rational_part, l_factor, l_factor_expr, loggamma_complex)

re_part = st.floats(-30, 30, allow_nan=False)
im_part = st.floats(-60, 60, allow_nan=False)


@given(re_part, im_part)
def test_loggamma_matches_mpmath(x, y):
    z = complex(x, y)
    if abs(z.imag) < 1e-6 and z.real <= 0 and abs(z.real - round(z.real)) < 1e-6:
        return
    want = complex(mpmath.loggamma(mpmath.mpc(x, y)))
    got = loggamma_complex(z)
    assert abs(got.real - want.real) <= 1e-12 * max(1.0, abs(want.real))
    # branch may differ by 2 pi i for the reflected half-plane
    d = (got.imag - want.imag) / (2 * math.pi)
    assert abs(d - round(d)) < 1e-10 * max(1.0, abs(want.imag))


def test_normalized_factors():
    assert eval_gamma_R(2) == pytest.approx(1 / math.pi)
    assert eval_gamma_C(1) == pytest.approx(1 / math.pi)
    assert eval_gamma_C(3) == pytest.approx(2 * (2 * math.pi) ** -3 * 2)


@given(st.floats(0.1, 5), st.floats(-3, 3))
def test_duplication(x, y):
    # Gamma_C(s) = Gamma_R(s) Gamma_R(s + 1)
    s = complex(x, y)
    assert eval_gamma_C(s) == pytest.approx(eval_gamma_R(s) * eval_gamma_R(s + 1), rel=1e-12)


def test_exact_rational_part():
    # Gamma_C(3) Gamma_R(1) / Gamma_R(4) = 2 (2pi)^-3 * 2 * pi^-1/2 sqrt(pi) / (pi^-2)
    expr = GammaExpr.of(("C", 3, 1), ("R", 1, 1), ("R", 4, -1))
    d = gamma_rational_part(expr)
    assert float(d) == pytest.approx(expr.evaluate(0).real, rel=1e-13)
    assert d.rational == Fraction(1, 2)
    assert d.pi_exponent == -1


@pytest.mark.parametrize("ell", [3, 5, 7])
def test_sigma_times_dual_factor_at_one(ell):
    expr = l_factor_expr(LFactorSpec("adjoint_GL3", ell))
    assert not expr.has_pole(1)
    assert expr.degree() == 9  # includes the trivial constituent


def test_rs_factor_degree_and_value():
    spec = LFactorSpec("RS_GL3xGL2", 5, 3)
    assert l_factor_expr(spec).degree() == 6
    assert np.isfinite(l_factor(spec, 2.0))


def _barnes_first_mp(a, b, c, d):
    g = lambda z: mpmath.pi ** (-z / 2) * mpmath.gamma(z / 2)
    # the contour measure is ds / (4 pi i), hence the factor 2
    return complex(2 * g(a + c) * g(a + d) * g(b + c) * g(b + d) / g(a + b + c + d))


@given(st.lists(st.complex_numbers(min_magnitude=0.3, max_magnitude=2.0).filter(lambda z: z.real > 0.2),
                min_size=4, max_size=4))
def test_barnes_first_closed_form(p):
    assert barnes_first(*p) == pytest.approx(_barnes_first_mp(*p), rel=1e-11)


def test_barnes_second_symmetric():
    p = (0.5 + 0.1j, 0.7, 0.9 - 0.2j, 0.6, 1.1)
    assert barnes_second(*p) == pytest.approx(barnes_second(p[1], p[0], p[2], p[3], p[4]), rel=1e-13)
    assert barnes_second(*p) == pytest.approx(barnes_second(p[0], p[1], p[2], p[4], p[3]), rel=1e-13)


def test_gamma_reflection():
    z = 0.3 + 0.4j
    assert gamma_complex(z) * gamma_complex(1 - z) == pytest.approx(math.pi / cmath.sin(math.pi * z), rel=1e-13)
