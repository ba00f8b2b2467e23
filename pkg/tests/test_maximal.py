from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from roughpdo import _backend
from roughpdo import maximal as mx
from roughpdo.gallery import annulus
from roughpdo.grid import GridFn, Spectrum, frequency_radius, inverse_transform
from roughpdo.lp_decomp import CUTOFF, project_band


def naive_dyadic_max(a):
    n = a.size
    out = np.zeros(n)
    for i in range(n):
        w = 1
        while w <= n:
            s = (i // w) * w
            out[i] = max(out[i], a[s: s + w].mean())
            w *= 2
    return out


def band_limited(g, n, dim=1):
    c = g.standard_normal((n,) * dim) + 1j * g.standard_normal((n,) * dim)
    c[frequency_radius(n, dim) > n / 4] = 0
    return inverse_transform(Spectrum(c))


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.sampled_from([2, 8, 64]))
def test_dyadic_maximal_matches_naive(seed, n):
    a = np.abs(np.random.default_rng(seed).standard_normal(n))
    expected = naive_dyadic_max(a)
    assert np.allclose(mx.hl_maximal(GridFn(a)).values.real, expected)
    for name in ("cython", "python"):
        try:
            k = _backend.load(name)
        except ImportError:
            continue
        assert np.allclose(k.dyadic_window_max(a, n), expected)


def test_dyadic_maximal_2d(rng):
    a = np.abs(rng.standard_normal((8, 8)))
    out = mx.hl_maximal(GridFn(a)).values.real
    assert out[0, 0] >= max(a[0, 0], a[:2, :2].mean(), a[:4, :4].mean(), a.mean()) - 1e-15
    assert out[3, 5] == pytest.approx(max(a[3, 5], a[2:4, 4:6].mean(), a[0:4, 4:8].mean(), a.mean()))


def test_band_sup_dominates_each_band(rng):
    f = band_limited(rng, 128)
    s = mx.band_sup(f).values.real
    for l in range(6):
        assert np.all(np.abs(project_band(f, l).values) <= s + 1e-15)


def test_u_grid_ratio_and_range():
    u = mx.carleson_u_grid(3, 256)
    assert u[0] == 0.5 and u[-1] >= 128
    assert np.allclose(u[1:] / u[:-1], 1 + 2.0**-5)


def test_carleson_max_at_single_u_is_multiplier(rng):
    n, m = 128, 2
    f = band_limited(rng, n)
    u = np.array([10.0])
    xi = np.fft.fftfreq(n, 1 / n)
    expected = np.abs(np.fft.ifft(CUTOFF.phi(2.0**m * (1 - xi**2 / 100.0)) * np.fft.fft(f.values)))
    assert np.allclose(mx.carleson_thin_max(m, f, u).values.real, expected)


def test_carleson_guards(rng):
    f = band_limited(rng, 64)
    with pytest.raises(ValueError, match="ratio"):
        mx.carleson_thin_max(3, f, [1.0, 2.0])
    with pytest.raises(ValueError, match="band-limited"):
        mx.carleson_thin_max(3, GridFn(rng.standard_normal(64)), [1.0])
    with pytest.raises(ValueError):
        mx.carleson_thin_max(3, f, [-1.0])
    with pytest.raises(ValueError):
        mx.carleson_thin_max(3, GridFn(np.zeros((8, 8))), [1.0])


def test_thin_circle_single_angle(rng):
    n, k0, m = 64, 2, 1
    c = (rng.standard_normal((n, n)) + 0j) * annulus(n, k0).reshape(n, n)
    f = inverse_transform(Spectrum(c))
    grid = mx.circle_angle_grid(m)
    assert np.diff(grid).max() <= 2.0 ** (-m - 2)
    out = mx.thin_circle_max(m, f, grid, k0).values.real
    one = np.abs(np.fft.ifft2(mx.thin_circle_multiplier(m, grid[3], n, k0) * np.fft.fft2(f.values)))
    assert np.all(one <= out + 1e-12)
    with pytest.raises(ValueError, match="step"):
        mx.thin_circle_max(m, f, grid[::2], k0)
    with pytest.raises(ValueError):
        mx.thin_circle_max(m, f, grid, 3)


def test_domination_check():
    lhs = GridFn(np.array([1.0, 2.0, 0.0, 1.0]))
    rhs = GridFn(np.array([1.0, 1.0, 0.0, 0.0]))
    d = mx.domination_check(lhs, rhs)
    assert d.constant == 2.0 and d.flagged == 1


def test_carleson_domination_is_finite(rng):
    d = mx.carleson_domination(3, band_limited(rng, 256))
    assert np.isfinite(d.constant) and d.flagged == 0


def test_report_outputs(tmp_path):
    rep = mx.MaximalReport([1.0], [1.0], 1.0, [0.5], per_m=[{"m": 2, "measured_C": 1.1, "u_grid_size": 9}])
    assert '"constant": 1.0' in rep.to_json()
    text = rep.write_constants_csv(tmp_path / "c.csv").read_text().splitlines()
    assert text[0] == "m,measured_C,u_grid_size" and text[1] == "2,1.1,9"
