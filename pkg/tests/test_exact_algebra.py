from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gl3arch.exact_algebra import (ExactMatrix, GaussianRational, I, MultiPoly, i_power, is_in_i_power_times_q,
                                   kernel, solve)

fracs = st.fractions(min_value=-50, max_value=50, max_denominator=30)
grs = st.builds(GaussianRational, fracs, fracs)
nonzero = grs.filter(bool)


@given(grs, grs, grs)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == GaussianRational(0)


@given(nonzero)
def test_inverse(a):
    assert a * a.inverse() == GaussianRational(1)
    assert a / a == GaussianRational(1)


@given(grs)
def test_conjugate_norm(a):
    assert a * a.conjugate() == GaussianRational(a.norm())
    assert complex(a) == pytest.approx(complex(float(a.re), float(a.im)))


@given(st.integers(-20, 20))
def test_i_powers(k):
    assert i_power(k) == I ** (k % 4)
    assert is_in_i_power_times_q(i_power(k) * Fraction(3, 7), k)
    assert not is_in_i_power_times_q(i_power(k + 1) * 5, k)


def test_poly_ring():
    V = ("x", "y")
    x, y = MultiPoly.var(V, "x"), MultiPoly.var(V, "y")
    p = (x + y) ** 3
    assert p.coefficient((2, 1)) == GaussianRational(3)
    assert p.derivative("x") == (x + y) ** 2 * 3
    assert p.substitute({"x": y, "y": x}) == p


@given(st.lists(st.lists(st.integers(-5, 5), min_size=3, max_size=3), min_size=3, max_size=3))
def test_matrix_solve_and_kernel(rows):
    A = ExactMatrix(rows)
    for v in kernel(A):
        assert all(x == 0 for x in A.apply(v))
    if A.det() != 0:
        b = [GaussianRational(1), GaussianRational(0, 2), GaussianRational(-3)]
        assert A.apply(solve(A, b)) == b
        assert A @ A.inverse() == ExactMatrix.identity(3)
