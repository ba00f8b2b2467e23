"""Pure numpy versions of the compiled kernels in ``_kernels.pyx``."""

import numpy as np


def phase_apply(rows, fhat, xidx, kidx, roots):
    idx = (xidx @ kidx.T) % roots.shape[0]
    return (rows * roots[idx]) @ fhat


def phase_adjoint(rows, g, xidx, kidx, roots, acc):
    idx = (xidx @ kidx.T) % roots.shape[0]
    acc += np.conj(rows * roots[idx]).T @ g


def dyadic_window_max(a, n):
    best = np.array(a, dtype=np.float64, copy=True)
    w = 1
    while w < n:
        w *= 2
        means = a.reshape(-1, w).mean(axis=1)
        np.maximum(best, np.repeat(means, w), out=best)
    return best
