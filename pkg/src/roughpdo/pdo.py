"""Application of T_sigma, its adjoint, dense matrices and operator norms.

Discretely,

    T_sigma f(x_i) = sum_xi sigma(x_i, xi) e^{2 pi i xi . x_i} fhat(xi),

with fhat the normalized forward transform.  The generic path is the direct
phase sum over rows of the symbol (compiled kernel when available).  Symbols
that are x-independent, separable, or take few distinct rows are routed
through multiplier passes instead.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _backend
from .grid import GridFn, frequencies
from .symbols import FieldSymbol, SeparableSymbol, Symbol

#: Largest N^dim for which ``dense_matrix`` will build a matrix.
DENSE_LIMIT = 4096

_threads = 1


def set_threads(count: int) -> int:
    """Worker count for row-parallel phase sums; 0 picks the CPU count."""
    global _threads
    _threads = max(1, count or os.cpu_count() or 1)
    return _threads


@dataclass(frozen=True)
class DenseOperator:
    matrix: np.ndarray
    tag: str
    n: int
    dim: int

    def __matmul__(self, f: GridFn) -> GridFn:
        return GridFn((self.matrix @ f.values.reshape(-1)).reshape(f.values.shape))


@dataclass(frozen=True)
class NormResult:
    value: float
    method: str
    converged: bool
    iterations: int


def _check(sigma: Symbol, f: GridFn) -> None:
    if (f.n, f.dim) != (sigma.n, sigma.dim):
        raise ValueError(f"grid (n={f.n}, dim={f.dim}) does not match {sigma!r}")


def _index_tables(n: int, dim: int):
    """Grid indices (size, dim) row-major and lattice indices mod n (size, dim) in FFT order."""
    i = np.arange(n, dtype=np.int64)
    k = frequencies(n) % n
    if dim == 1:
        return i[:, None].copy(), k[:, None].astype(np.int64)
    i1, i2 = np.meshgrid(i, i, indexing="ij")
    k1, k2 = np.meshgrid(k, k, indexing="ij")
    xidx = np.stack([i1.reshape(-1), i2.reshape(-1)], axis=1).astype(np.int64)
    kidx = np.stack([k1.reshape(-1), k2.reshape(-1)], axis=1).astype(np.int64)
    return xidx, kidx


def _roots(n: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(n) / n)


def _spec(f: GridFn) -> np.ndarray:
    return (np.fft.fftn(f.values) / f.values.size).reshape(-1)


def _multiplier(row: np.ndarray, fhat: np.ndarray, shape) -> np.ndarray:
    """sum_xi row(xi) e^{2 pi i xi x} fhat(xi) on the whole grid, flattened."""
    size = fhat.size
    return (np.fft.ifftn((row * fhat).reshape(shape)) * size).reshape(-1)


def _chunks(sigma: Symbol):
    step = sigma.chunk_rows()
    return [(s, min(s + step, sigma.size)) for s in range(0, sigma.size, step)]


def _map(func, items):
    if _threads <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(_threads) as pool:
        return list(pool.map(func, items))


def _generic_apply(sigma: Symbol, fhat: np.ndarray, kernels) -> np.ndarray:
    xidx, kidx = _index_tables(sigma.n, sigma.dim)
    roots = _roots(sigma.n)

    def block(span):
        s, e = span
        return kernels.phase_apply(np.ascontiguousarray(sigma.rows(s, e)), fhat,
                                   np.ascontiguousarray(xidx[s:e]), kidx, roots)

    return np.concatenate(_map(block, _chunks(sigma)))


def _generic_adjoint(sigma: Symbol, g: np.ndarray, kernels) -> np.ndarray:
    xidx, kidx = _index_tables(sigma.n, sigma.dim)
    roots = _roots(sigma.n)

    def block(span):
        s, e = span
        acc = np.zeros(sigma.size, dtype=np.complex128)
        kernels.phase_adjoint(np.ascontiguousarray(sigma.rows(s, e)), np.ascontiguousarray(g[s:e]),
                              np.ascontiguousarray(xidx[s:e]), kidx, roots, acc)
        return acc

    return np.sum(_map(block, _chunks(sigma)), axis=0)


def _few_rows(sigma: Symbol) -> bool:
    return isinstance(sigma, FieldSymbol) and np.unique(sigma.field).size <= sigma.size // 4


def apply(sigma: Symbol, f: GridFn, path: str = "auto", backend: str | None = None) -> GridFn:
    """T_sigma f.

    Parameters
    ----------
    path : {"auto", "generic"}
        ``"generic"`` forces the direct phase sum.
    backend : {"cython", "python"}, optional
        Kernel module for the phase sum; defaults to the one chosen at import.
    """
    _check(sigma, f)
    shape = f.values.shape
    fhat = _spec(f)
    kernels = _backend.kernels if backend is None else _backend.load(backend)
    if path == "generic":
        out = _generic_apply(sigma, fhat, kernels)
    elif path != "auto":
        raise ValueError(f"unknown path {path!r}")
    elif sigma.x_independent:
        out = _multiplier(sigma.row_at(0), fhat, shape)
    elif isinstance(sigma, SeparableSymbol):
        out = sum(a * _multiplier(b, fhat, shape) for a, b in zip(sigma.x_factors, sigma.xi_factors))
    elif _few_rows(sigma):
        out = np.empty(sigma.size, dtype=np.complex128)
        for row, mask in sigma.groups():
            out[mask] = _multiplier(row, fhat, shape)[mask]
    else:
        out = _generic_apply(sigma, fhat, kernels)
    return GridFn(np.asarray(out).reshape(shape))


def apply_adjoint(sigma: Symbol, g: GridFn, path: str = "auto", backend: str | None = None) -> GridFn:
    """Conjugate transpose of ``apply`` under the grid inner product."""
    _check(sigma, g)
    shape = g.values.shape
    gv = g.values.reshape(-1)
    kernels = _backend.kernels if backend is None else _backend.load(backend)

    def adj_mult(row, h):
        # conjugate multiplier pass: F^H diag(conj row) F
        return _multiplier(np.conj(row), _spec(GridFn(h.reshape(shape))), shape)

    if path == "generic":
        out = np.fft.ifftn(_generic_adjoint(sigma, gv, kernels).reshape(shape)).reshape(-1)
    elif path != "auto":
        raise ValueError(f"unknown path {path!r}")
    elif sigma.x_independent:
        out = adj_mult(sigma.row_at(0), gv)
    elif isinstance(sigma, SeparableSymbol):
        out = sum(adj_mult(b, np.conj(a) * gv) for a, b in zip(sigma.x_factors, sigma.xi_factors))
    elif _few_rows(sigma):
        out = np.zeros(sigma.size, dtype=np.complex128)
        for row, mask in sigma.groups():
            out += adj_mult(row, np.where(mask, gv, 0))
    else:
        out = np.fft.ifftn(_generic_adjoint(sigma, gv, kernels).reshape(shape)).reshape(-1)
    return GridFn(np.asarray(out).reshape(shape))


def dense_matrix(sigma: Symbol) -> DenseOperator:
    """Matrix of T_sigma acting on flattened samples (row-major)."""
    if sigma.size > DENSE_LIMIT:
        raise MemoryError(f"N^dim = {sigma.size} exceeds the dense limit {DENSE_LIMIT}")
    xidx, kidx = _index_tables(sigma.n, sigma.dim)
    phase = _roots(sigma.n)[(xidx @ kidx.T) % sigma.n]
    a = sigma.table() * phase
    # right-multiplying by the normalized DFT matrix is an FFT along each row
    shape = (sigma.size,) + (sigma.n,) * sigma.dim
    axes = tuple(range(1, sigma.dim + 1))
    m = np.fft.fftn(a.reshape(shape), axes=axes).reshape(sigma.size, sigma.size) / sigma.size
    return DenseOperator(m, tag=f"{sigma.tag}@n={sigma.n},dim={sigma.dim}", n=sigma.n, dim=sigma.dim)


def operator_norm(sigma: Symbol, method: str = "power", tol: float = 1e-9, max_iter: int = 500,
                  seed: int = 0, block: int = 4) -> NormResult:
    """Largest singular value of the discrete T_sigma.

    ``power`` iterates a block of ``block`` vectors under T*T with a
    Rayleigh-Ritz step after each sweep; it stops once the top Ritz value
    changes by less than ``tol`` relatively.  Hitting ``max_iter`` returns
    ``converged=False``.  ``dense`` takes the SVD of ``dense_matrix``.
    """
    if method == "dense":
        s = np.linalg.svd(dense_matrix(sigma).matrix, compute_uv=False)
        return NormResult(float(s[0]), "dense", True, 0)
    if method != "power":
        raise ValueError(f"unknown method {method!r}")
    rng = np.random.default_rng(seed)
    shape = (sigma.n,) * sigma.dim
    block = max(1, min(block, sigma.size))
    q = rng.standard_normal((sigma.size, block)) + 1j * rng.standard_normal((sigma.size, block))
    q, _ = np.linalg.qr(q)

    def gram(v):
        return apply_adjoint(sigma, apply(sigma, GridFn(v.reshape(shape)))).values.reshape(-1)

    prev, top = None, 0.0
    for it in range(1, max_iter + 1):
        h = np.stack([gram(q[:, c]) for c in range(block)], axis=1)
        small = q.conj().T @ h
        evals, evecs = np.linalg.eigh((small + small.conj().T) / 2)
        top = float(max(evals[-1], 0.0))
        if not np.any(h):
            return NormResult(0.0, "power", True, it)
        q, _ = np.linalg.qr(h @ evecs[:, ::-1])
        if prev is not None and abs(top - prev) <= tol * top:
            return NormResult(float(np.sqrt(top)), "power", True, it)
        prev = top
    return NormResult(float(np.sqrt(top)), "power", False, max_iter)
