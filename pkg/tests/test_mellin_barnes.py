import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gl3arch.mellin_barnes import (ContourSpec, GridError, GridGeometry, MAGIC, WhittakerSpec, build_grid,
                                   cached_grid, contour_integral, grid_key, load_grid, monomial_expansion,
                                   save_grid, whittaker_gl3, whittaker_gl3_grid)

# Frozen from an independent run with T = 80, N = 4800.
GOLDEN_W = 1.0350465780471826e-22 + 7.318677322424369e-08j


def test_contour_gaussian():
    # int exp(s^2) ds / (2 pi i) along Re s = c equals 1 / (2 sqrt(pi))
    res = contour_integral(lambda s: np.exp(s ** 2), ContourSpec(c=0.3, T=12, N=400))
    assert res.value == pytest.approx(1 / (2 * math.sqrt(math.pi)), rel=1e-12)
    assert res.tail_ratio < 1e-14


def test_contour_spec_validation():
    with pytest.raises(ValueError):
        ContourSpec(N=7)
    with pytest.raises(ValueError):
        ContourSpec(T=0)
    assert ContourSpec(N=2400).halved().N == 1200


@pytest.mark.parametrize("kw", [dict(ell=4, j=(2, 1, 1)), dict(ell=5, j=(3, 0, 1)), dict(ell=5, w=1, j=(5, 0, 0)),
                                dict(ell=5), dict(ell=5, j=(5, 0, 0), i=1)])
def test_spec_validation(kw):
    with pytest.raises(ValueError):
        WhittakerSpec("GL3", **kw)


def test_golden_value():
    w = whittaker_gl3(WhittakerSpec("GL3", ell=5, j=(3, 0, 2)), 1.0, 1.0)
    assert abs(w - GOLDEN_W) <= 1e-10 * abs(GOLDEN_W)


def test_contour_shift_independence():
    spec = WhittakerSpec("GL3", ell=5, j=(3, 0, 2))
    a = whittaker_gl3(spec, 0.7, 1.3, ContourSpec(c=1.0))
    b = whittaker_gl3(spec, 0.7, 1.3, ContourSpec(c=1.6))
    assert abs(a - b) <= 1e-10 * abs(a)


@settings(max_examples=10)
@given(st.integers(-3, 3))
def test_so3_index_is_linear_in_monomials(i):
    u = [-0.3, 0.2]
    direct = whittaker_gl3_grid(WhittakerSpec("GL3", ell=3, i=i), u, u).values
    total = sum(c * whittaker_gl3_grid(WhittakerSpec("GL3", ell=3, j=j), u, u).values
                for j, c in monomial_expansion(3, i).items())
    assert np.allclose(direct, total, rtol=1e-12, atol=1e-12 * np.abs(total).max())


def test_decay_at_large_a():
    spec = WhittakerSpec("GL3", ell=3, j=(1, 1, 1))
    assert abs(whittaker_gl3(spec, 30.0, 1.0)) < 1e-20


@pytest.fixture(scope="module")
def small_grid():
    geom = GridGeometry.with_step((-1.0, 1.0), (-1.0, 1.0), 0.05)
    return build_grid(WhittakerSpec("GL3", ell=3, j=(2, 0, 1)), geom, probes=8)


def test_grid_self_test(small_grid):
    assert small_grid.self_test["passed"]
    assert small_grid.self_test["max_scaled_error"] <= 1e-8


def test_grid_round_trip_bit_exact(small_grid, tmp_path):
    path = save_grid(small_grid, tmp_path / "g.w3g")
    raw = path.read_bytes()
    assert raw.startswith(MAGIC)
    back = load_grid(path)
    assert back.values.tobytes() == small_grid.values.tobytes()
    assert back.spec == small_grid.spec and back.geometry == small_grid.geometry
    assert back.contour == small_grid.contour
    save_grid(back, tmp_path / "h.w3g")
    assert (tmp_path / "h.w3g").read_bytes() == raw


def test_grid_is_read_only(small_grid):
    with pytest.raises(ValueError):
        small_grid.values[0, 0] = 0


def test_grid_outside_geometry(small_grid):
    with pytest.raises(GridError):
        small_grid.interpolate(math.exp(2.0), 1.0)


def test_corrupt_file_rejected(tmp_path):
    p = tmp_path / "bad.w3g"
    p.write_bytes(b"nonsense")
    with pytest.raises(GridError):
        load_grid(p)


def test_cache_reuses_file(tmp_path):
    spec = WhittakerSpec("GL3", ell=3, j=(3, 0, 0))
    geom = GridGeometry(-0.5, 0.5, 6, -0.5, 0.5, 6)
    g1 = cached_grid(spec, geom, cache_dir=tmp_path)
    files = list(tmp_path.iterdir())
    assert [f.name for f in files] == [grid_key(spec, geom, ContourSpec()) + ".w3g"]
    g2 = cached_grid(spec, geom, cache_dir=tmp_path)
    assert g2.values.tobytes() == g1.values.tobytes()
