import pytest
from hypothesis import given, strategies as st

from gl3arch.euler_factory import (IDENTITIES, STANDARD, TRIVIAL, SatakeMultiset, archimedean_degree_check,
                                   check_factorization, equal_by_symmetric_functions, sym_power)

monos = st.tuples(st.integers(-4, 4), st.integers(-4, 4))
multisets = st.lists(monos, max_size=6).map(SatakeMultiset.of)


@given(multisets)
def test_dual_is_an_involution(S):
    assert S.dual().dual() == S


@given(multisets, st.integers(-3, 3), st.integers(-3, 3))
def test_twists_compose(S, a, b):
    assert S.twist(a).twist(b) == S.twist(a + b)
    assert S.twist(a).twist(-a) == S


@given(multisets, multisets)
def test_tensor_commutes_and_dualizes(S, T):
    assert S * T == T * S
    assert (S * T).dual() == S.dual() * T.dual()
    assert len(S * T) == len(S) * len(T)


@given(multisets, multisets)
def test_symmetric_functions_detect_equality(S, T):
    assert equal_by_symmetric_functions(S, T) == (S == T)


@pytest.mark.parametrize("k", range(0, 6))
def test_sym_power_size(k):
    assert len(sym_power(STANDARD, k)) == k + 1


@pytest.mark.parametrize("identity", sorted(IDENTITIES))
def test_identities_hold(identity):
    res = check_factorization(identity)
    assert res.equal and res.equal_symmetric
    assert res.to_report().ok


@pytest.mark.parametrize("identity", sorted(IDENTITIES))
@pytest.mark.parametrize("drop", [0, 3])
def test_negative_control(identity, drop):
    res = check_factorization(identity, drop)
    assert not res.equal and not res.equal_symmetric
    assert not res.to_report().ok


def test_unknown_identity():
    with pytest.raises(ValueError):
        check_factorization("nope")


@pytest.mark.parametrize("kappa", [2, 3, 4, 5])
def test_archimedean_gamma_factors(kappa):
    assert archimedean_degree_check(kappa)["ok"]


def test_trivial_is_unit_for_tensor():
    assert STANDARD * TRIVIAL == STANDARD
