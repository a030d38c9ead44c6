import pytest
from hypothesis import given, strategies as st

from gl3arch import rep_theory as rt
from gl3arch.exact_algebra import ExactMatrix, GaussianRational, I
from gl3arch.suites import pairing_anchor_reports, rep_suite

small = st.integers(-2, 2)
mat2 = st.lists(small, min_size=4, max_size=4).map(lambda e: ExactMatrix([e[:2], e[2:]])).filter(lambda g: g.det() != 0)


@st.composite
def signed_permutations(draw):
    """Rational points of O(3): the quotient by the quadric is only preserved there."""
    perm = draw(st.permutations(range(3)))
    signs = draw(st.lists(st.sampled_from((1, -1)), min_size=3, max_size=3))
    return ExactMatrix([[signs[r] if perm[r] == c else 0 for c in range(3)] for r in range(3)])


mat3 = signed_permutations()


def _mul(A, B):
    n = len(A)
    return [[sum((A[i][k] * B[k][j] for k in range(n)), GaussianRational(0)) for j in range(n)] for i in range(n)]


@given(mat2, mat2)
def test_gl2_action_is_a_homomorphism(g, h):
    M = rt.gl2_module(rt.Weight2(2, -1))
    assert M.group_matrix(g @ h) == _mul(M.group_matrix(g), M.group_matrix(h))


@given(mat3, mat3)
def test_so3_polynomial_action_is_a_homomorphism(g, h):
    V = rt.so3_module(2)
    assert V.group_matrix(g @ h) == _mul(V.group_matrix(g), V.group_matrix(h))


@pytest.mark.parametrize("ell", range(0, 8))
def test_so3_generators(ell):
    assert all(rt.so3_action_check(ell).values())
    assert rt.invariant_vector_check(ell)


def test_adjoint_action():
    assert all(rt.adjoint_action_check().values())


@pytest.mark.parametrize("ell,w,degree", [(3, 0, 2), (5, 0, 2), (5, 2, 3)])
def test_relation_and_highest_weight(ell, w, degree):
    assert all(rt.relation_check(ell, w, degree).values())
    assert rt.seed_is_highest_weight(ell, w, degree)


def test_weights():
    assert rt.sigma_weight(5, 0) == rt.Weight3(1, 0, -1)
    assert rt.pi_weight(3, 1) == rt.Weight2(1, 0)
    assert rt.Weight3(1, 0, -1).weyl_dimension() == 8
    with pytest.raises(rt.RepTheoryError):
        rt.sigma_weight(4, 0)


@given(st.integers(-3, 3), st.integers(0, 3), st.integers(-2, 2))
def test_branching_matches_interlacing(a, d, m):
    lam = rt.Weight2(a + d, a)
    mu = rt.Weight3(1, 0, -1)
    assert (rt.branching_hom(lam, m, mu) is not None) == rt.interlaces(lam, m, mu)


@pytest.mark.parametrize("kappa", range(2, 7))
def test_poincare_constants(kappa):
    total, closed, coeff = rt.poincare_constants_gl2(kappa, kappa % 2)
    assert total == closed
    assert coeff == I * 8


def test_pairing_anchors_exact():
    assert all(r.ok for r in pairing_anchor_reports())


@pytest.mark.parametrize("name", sorted(rt.SAMPLE_ROTATIONS))
def test_wedge_equivariance(name):
    assert rt.wedge_group_equivariance(rt.SAMPLE_ROTATIONS[name])


@pytest.mark.parametrize("ell", [3, 5])
def test_invariant_bilinear_form(ell):
    assert rt.lie_bilinear_check(ell)


@pytest.mark.parametrize("m,sign,value", [(-1, 1, GaussianRational(0, -64)), (-1, -1, GaussianRational(0, -64)),
                                          (0, 1, GaussianRational(-64)), (0, -1, GaussianRational(64))])
def test_rs_combinatorial_constants(m, sign, value):
    assert rt.combinatorial_pairing_rs(5, 3, 0, 1, m, sign).value == value


@pytest.mark.parametrize("ell,value", [(3, 560), (5, 11088)])
def test_adjoint_combinatorial_constant(ell, value):
    assert rt.combinatorial_pairing_adjoint(ell, 0) == GaussianRational(value)


def test_rationality_of_conjugated_action():
    mu = rt.sigma_weight(5, 0)
    for sign in (1, -1):
        assert rt.rationality_check_ad(mu, sign)[0]
        assert not rt.rationality_check_ad(mu, sign, conjugate=False)[0]


def test_corrupted_basis_detected():
    reports = rep_suite(2, corrupt_basis=True)
    bad = [r for r in reports if not r.ok]
    assert bad and all(r.lemma == "so3_action" for r in bad)


@given(st.integers(2, 7), st.integers(-3, 3), st.integers(-1, 1))
def test_rewriting_factors_closed_form(kappa, m, shift):
    w_pi = kappa % 2 + 2 * shift
    c_plus, c_minus = rt.gl2_rewriting_factors(kappa, w_pi, m)
    e = m + (kappa + w_pi) // 2
    two = GaussianRational(-2) ** (e - 1)
    assert c_plus == two * rt.i_power(-3 + m + (3 * kappa + w_pi) // 2)
    assert c_minus == two * rt.i_power(m - 1 + (kappa + 3 * w_pi) // 2)
    # the factor without the determinant of the Cayley matrix is off by det = -2i
    naive = GaussianRational(-2) ** e * rt.i_power(-2 + m + (3 * kappa + w_pi) // 2)
    assert naive / c_plus == rt.CAYLEY_GL2.det() == GaussianRational(0, -2)


@pytest.mark.parametrize("ell,w", [(3, 0), (3, 2), (3, -2)])
def test_adjoint_termwise_signs(ell, w):
    assert all(rt.adjoint_termwise_check(ell, w).values())
    assert rt.combinatorial_pairing_adjoint(ell, w) == GaussianRational(560)
