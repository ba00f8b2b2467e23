from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from roughpdo import gallery as gal
from roughpdo import pdo
from roughpdo.grid import GridFn, forward_transform, frequencies, inner
from roughpdo.symbols import (DirectionField, FieldSymbol, SeparableSymbol, TableSymbol, constant_symbol,
                              lattice, multiplier_symbol)


def naive_apply(table, f):
    """T f(x) = sum_xi sigma(x, xi) e^{2 pi i x . xi} fhat(xi), one point at a time."""
    n, dim = f.n, f.dim
    fhat = forward_transform(f).coeffs.reshape(-1)
    ks = np.stack(lattice(n, dim), axis=1)
    x = np.arange(n) / n
    pts = x[:, None] if dim == 1 else np.stack([a.reshape(-1) for a in np.meshgrid(x, x, indexing="ij")], 1)
    out = np.empty(n**dim, dtype=complex)
    for i, p in enumerate(pts):
        out[i] = np.sum(table[i] * np.exp(2j * np.pi * (ks @ p)) * fhat)
    return out.reshape(f.values.shape)


def rand_fn(g, n, dim=1):
    return GridFn(g.standard_normal((n,) * dim) + 1j * g.standard_normal((n,) * dim))


@pytest.mark.parametrize("dim,n", [(1, 32), (2, 8)])
def test_generic_apply_matches_direct_sum(rng, backend, dim, n):
    size = n**dim
    sigma = TableSymbol(rng.standard_normal((size, size)) + 1j * rng.standard_normal((size, size)), dim=dim)
    f = rand_fn(rng, n, dim)
    got = pdo.apply(sigma, f, path="generic", backend=backend).values
    assert np.allclose(got, naive_apply(sigma.table(), f), atol=1e-11)


def test_identity_and_multiplier(rng):
    f = rand_fn(rng, 64)
    assert np.abs(pdo.apply(constant_symbol(64), f).values - f.values).max() < 1e-12
    m = rng.standard_normal(64)
    expected = np.fft.ifft(m * np.fft.fft(f.values))
    assert np.allclose(pdo.apply(multiplier_symbol(m), f).values, expected)


def test_tone_eigenfunction_for_x_independent():
    # a multiplier maps e^{2 pi i k x} to m(k) e^{2 pi i k x}
    m = np.arange(32.0)
    out = pdo.apply(multiplier_symbol(m), GridFn.tone(5, 32))
    assert np.allclose(out.values, 5.0 * GridFn.tone(5, 32).values)


def test_fast_paths_agree_with_generic(rng):
    n = 64
    sep = SeparableSymbol(rng.standard_normal((3, n)), rng.standard_normal((3, n)))
    u = DirectionField.random_dilation(n, 4.0, rng, distinct=3)
    field = gal.carleson_thin_symbol(2, u, 2, n)
    f = rand_fn(rng, n)
    for sigma in (sep, field, multiplier_symbol(rng.standard_normal(n))):
        assert np.allclose(pdo.apply(sigma, f).values, pdo.apply(sigma, f, path="generic").values, atol=1e-11)
        assert np.allclose(pdo.apply_adjoint(sigma, f).values,
                           pdo.apply_adjoint(sigma, f, path="generic").values, atol=1e-11)


def test_backends_agree(rng):
    sigma = TableSymbol(rng.standard_normal((64, 64)))
    f = rand_fn(rng, 64)
    a = pdo.apply(sigma, f, path="generic", backend="python").values
    for b in ("cython", "python"):
        try:
            got = pdo.apply(sigma, f, path="generic", backend=b).values
        except ImportError:
            continue
        assert np.allclose(got, a, atol=1e-12)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), dim=st.sampled_from([1, 2]))
def test_adjoint_identity(seed, dim):
    g = np.random.default_rng(seed)
    n = 16 if dim == 1 else 4
    size = n**dim
    sigma = TableSymbol(g.standard_normal((size, size)) + 1j * g.standard_normal((size, size)), dim=dim)
    f, h = rand_fn(g, n, dim), rand_fn(g, n, dim)
    lhs = inner(pdo.apply(sigma, f), h)
    rhs = inner(f, pdo.apply_adjoint(sigma, h))
    assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(lhs))


def test_dense_matrix_acts_like_apply(rng):
    sigma = TableSymbol(rng.standard_normal((32, 32)))
    f = rand_fn(rng, 32)
    m = pdo.dense_matrix(sigma).matrix
    assert np.allclose(m @ f.values, pdo.apply(sigma, f).values)
    sigma2 = TableSymbol(rng.standard_normal((16, 16)), dim=2)
    f2 = rand_fn(rng, 4, 2)
    assert np.allclose(pdo.dense_matrix(sigma2).matrix @ f2.values.reshape(-1),
                       pdo.apply(sigma2, f2).values.reshape(-1))


def test_dense_limit():
    with pytest.raises(MemoryError):
        pdo.dense_matrix(constant_symbol(8192))


def test_norm_of_multiplier_is_max_modulus(rng):
    m = rng.standard_normal(128)
    for method in ("dense", "power"):
        res = pdo.operator_norm(multiplier_symbol(m), method)
        assert res.converged
        assert res.value == pytest.approx(np.abs(m).max(), rel=1e-6)


def test_power_agrees_with_dense(rng):
    sigma = gal.random_symbol(64, rng)
    dense = pdo.operator_norm(sigma, "dense").value
    power = pdo.operator_norm(sigma, "power")
    assert power.converged
    assert power.value == pytest.approx(dense, rel=1e-6)


def test_power_flags_non_convergence(rng):
    sigma = TableSymbol(rng.standard_normal((64, 64)))
    res = pdo.operator_norm(sigma, "power", max_iter=2)
    assert not res.converged and res.iterations == 2


def test_zero_symbol_norm():
    assert pdo.operator_norm(constant_symbol(16, c=0.0), "power").value == 0.0


def test_threads_do_not_change_results(rng):
    # 64^2 points split into several row chunks
    sigma = gal.thin_circle_symbol(1, DirectionField.random_angles(64 * 64, rng), 2, 64)
    assert len(pdo._chunks(sigma)) > 1
    f = rand_fn(rng, 64, 2)
    one = pdo.apply(sigma, f, path="generic").values
    try:
        pdo.set_threads(3)
        many = pdo.apply(sigma, f, path="generic").values
    finally:
        pdo.set_threads(1)
    assert np.array_equal(one, many)


def test_grid_mismatch():
    with pytest.raises(ValueError):
        pdo.apply(constant_symbol(16), GridFn(np.ones(32)))
    with pytest.raises(ValueError):
        pdo.apply(constant_symbol(16), GridFn(np.ones(16)), path="fast")
