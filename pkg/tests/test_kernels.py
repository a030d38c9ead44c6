import numpy as np
import pytest
from hypothesis import given, strategies as st

from gl3arch import _kernels as K

pytestmark = pytest.mark.skipif(not K._NUMBA_OK, reason="numba unavailable")

cplx = st.complex_numbers(max_magnitude=40, allow_nan=False, allow_infinity=False)


@given(st.lists(cplx, min_size=1, max_size=30))
def test_loggamma_backends_agree(zs):
    z = np.array([x for x in zs if not (x.imag == 0 and x.real <= 0 and x.real == round(x.real))] or [1.5],
                 dtype=np.complex128)
    a, b = K._nb_loggamma(z), K.loggamma_numpy(z)
    assert np.allclose(a, b, rtol=1e-13, atol=1e-13)


def test_hankel_backends_agree():
    rng = np.random.default_rng(1)
    a = rng.normal(size=7) + 1j * rng.normal(size=7)
    b = rng.normal(size=5) + 1j * rng.normal(size=5)
    h = rng.normal(size=11) + 1j * rng.normal(size=11)
    assert np.allclose(K._nb_hankel(a, h, b), K.hankel_kernel_numpy(a, h, b), rtol=1e-13)


def test_weighted_sum_backends_agree():
    rng = np.random.default_rng(2)
    v = rng.normal(size=(9, 6)) + 1j * rng.normal(size=(9, 6))
    w1, w2 = rng.normal(size=9) + 0j, rng.normal(size=6) + 0j
    assert K._nb_weighted_sum(v, w1, w2) == pytest.approx(K.weighted_sum_numpy(v, w1, w2), rel=1e-13)


def test_env_flag_selects_numpy(monkeypatch):
    monkeypatch.setenv("GL3ARCH_DISABLE_NUMBA", "1")
    assert K.backend() == "numpy"
    monkeypatch.setenv("GL3ARCH_DISABLE_NUMBA", "0")
    assert K.backend() == "numba"


def test_short_hankel_symbol_rejected():
    with pytest.raises(ValueError):
        K.hankel_kernel(np.ones(3), np.ones(3), np.ones(3))
