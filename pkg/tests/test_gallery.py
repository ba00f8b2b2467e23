from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from roughpdo import gallery as gal
from roughpdo import pdo
from roughpdo.grid import GridFn, forward_transform, lp_norm
from roughpdo.symbols import DirectionField


@pytest.fixture(scope="module")
def f0():
    return gal.counterexample_f0(2**12)


def test_harmonic_partial_sum_matches_float_sum():
    for nt in (8, 16, 100):
        assert gal.harmonic_partial_sum(nt) == pytest.approx(math.fsum(1 / j for j in range(8, nt + 1)),
                                                             rel=1e-15)


def test_threshold_formula():
    assert gal.sobolev_threshold(0.1) == pytest.approx(2.0 + 0.4 / 0.8)
    assert gal.sobolev_threshold(0.0) == 2.0


def test_window_shape():
    assert gal.counterexample_window(1.0) == 1.0
    assert gal.counterexample_window(0.625) == 0.0 and gal.counterexample_window(1.375) == 0.0
    assert gal.counterexample_window(0.7) > 0


def test_f0_spectrum_radius(f0):
    c = np.abs(forward_transform(f0).coeffs)
    assert c[0] == pytest.approx(1.0)
    assert c[17:-17].max() <= 1e-14
    with pytest.raises(ValueError):
        gal.counterexample_f0(2**12, radius=32)


def test_grid_counterexample_collapses_to_harmonic_multiple(f0):
    delta = 0.1
    sigma = gal.counterexample_symbol(delta, 9, 2**12)
    fn = gal.counterexample_testfn(delta, 9, f0)
    out = pdo.apply(sigma, fn)
    h = gal.harmonic_partial_sum(9)
    assert np.abs(out.values - h * f0.values).max() <= 1e-12 * np.abs(f0.values).max()
    norm_sq = sum(j ** -(1 + 2 * delta) for j in (8, 9))
    assert lp_norm(fn, 2) == pytest.approx(math.sqrt(norm_sq) * lp_norm(f0, 2), rel=1e-12)


def test_sparse_agrees_with_grid(f0):
    delta = 0.2
    sp = gal.counterexample_testfn_sparse(delta, 9, f0)
    dense = forward_transform(gal.counterexample_testfn(delta, 9, f0)).coeffs
    assert np.abs(sp.to_grid(2**12).coeffs - dense).max() <= 1e-15
    out = gal.apply_counterexample_sparse(delta, 9, sp)
    grid = forward_transform(pdo.apply(gal.counterexample_symbol(delta, 9, 2**12),
                                       gal.counterexample_testfn(delta, 9, f0))).coeffs
    assert np.abs(out.to_grid(2**12).coeffs - grid).max() <= 1e-14


@settings(max_examples=10, deadline=None)
@given(nt=st.integers(8, 120), delta=st.floats(0.01, 0.45))
def test_sparse_growth_is_harmonic(nt, delta):
    f0 = gal.counterexample_f0(2**10)
    base = gal.SparseSpectrum.from_grid(f0, tol=1e-14)
    out = gal.apply_counterexample_sparse(delta, nt, gal.counterexample_testfn_sparse(delta, nt, f0))
    assert out.norm() / base.norm() == pytest.approx(gal.harmonic_partial_sum(nt), rel=1e-12)


def test_sparse_roundtrip(rng):
    f = GridFn(rng.standard_normal(32))
    sp = gal.SparseSpectrum.from_grid(f)
    assert sp.norm() == pytest.approx(lp_norm(f, 2))
    assert np.allclose(sp.to_grid(32).coeffs, forward_transform(f).coeffs)
    with pytest.raises(ValueError):
        gal.SparseSpectrum({100: 1.0}).to_grid(32)
    assert sp.scaled_distance(sp, 1.0) == 0.0


def test_counterexample_guards(f0):
    with pytest.raises(ValueError):
        gal.counterexample_symbol(0.1, 10, 2**12)
    with pytest.raises(ValueError):
        gal.counterexample_symbol(0.6, 9, 2**12)
    with pytest.raises(ValueError):
        gal.counterexample_testfn(0.1, 11, f0)
    with pytest.raises(ValueError):
        gal.counterexample_sobolev_quantity(0.1, 16, 2.4)


def test_sobolev_quantity_factorizes():
    w = gal.window_sobolev_constant(3.0, length=2**12, dilation=2**6)
    q = gal.counterexample_sobolev_quantity(0.1, 20, 3.0, constant=w)
    expected = math.fsum(j ** (-0.4 * 3) for j in range(8, 21)) ** (1 / 3) * w
    assert q == pytest.approx(expected)


def test_window_constant_is_dilation_invariant():
    a = gal.window_sobolev_constant(3.0, length=2**13, dilation=2**6)
    b = gal.window_sobolev_constant(3.0, length=2**14, dilation=2**7)
    assert a == pytest.approx(b, rel=1e-3)


def test_carleson_symbol_rows(rng):
    n, k0 = 256, 4
    u = DirectionField.constant(16.0, n, "dilation")
    s = gal.carleson_thin_symbol(2, u, k0, n)
    row = s.row_at(0)
    assert row[16] == pytest.approx(0.0) and row[0] == 0.0
    assert np.all(np.abs(row) <= 1.0)
    gal.assert_band_limited(s)
    with pytest.raises(ValueError):
        gal.carleson_thin_symbol(2, DirectionField.constant(80.0, n, "dilation"), k0, n)
    with pytest.raises(ValueError):
        gal.carleson_thin_symbol(0, u, k0, n)


def test_thin_circle_and_directional(rng):
    n, k0 = 64, 2
    ang = DirectionField.random_angles(n * n, rng)
    with pytest.raises(ValueError):
        gal.thin_circle_symbol(3, ang, k0, n)
    s = gal.directional_symbol(0.25, ang, k0, n)
    assert np.abs(s.rows(0, 50)).max() <= 1.0
    assert gal.psi_profile(1.0) == pytest.approx(1.0)
    assert gal.psi_profile(-3.0) == pytest.approx(-1.0)
    assert gal.psi_profile(0.0) == pytest.approx(0.0)
    with pytest.raises(ValueError):
        gal.directional_symbol(0.25, DirectionField.constant(1.0, n * n, "dilation"), k0, n)


def test_band_limit_guard():
    with pytest.raises(ValueError):
        gal.band_multiplier(5, 64)
    from roughpdo.symbols import constant_symbol

    with pytest.raises(ValueError):
        gal.assert_band_limited(constant_symbol(32))


def test_gallery_contents(rng):
    g = gal.gallery_1d(128, rng)
    assert {"constant", "rough_sign", "carleson_thin_m4"} <= set(g)
    assert "counterexample" not in g
    assert "counterexample" in gal.gallery_1d(2**11, rng)
