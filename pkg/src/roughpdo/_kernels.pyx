# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled phase-sum kernels for the generic pseudodifferential apply.

Phases e^{2 pi i xi.x} on an n-point torus are looked up in a table of the
n-th roots of unity, indexed by (i . k) mod n, so no transcendental function
is evaluated inside the loops.
"""
import numpy as np


def phase_apply(const double complex[:, ::1] rows,
                const double complex[::1] fhat,
                const long long[:, ::1] xidx,
                const long long[:, ::1] kidx,
                const double complex[::1] roots):
    """out[i] = sum_p rows[i, p] * roots[(xidx[i] . kidx[p]) mod n] * fhat[p]."""
    cdef Py_ssize_t m = rows.shape[0]
    cdef Py_ssize_t npts = rows.shape[1]
    cdef Py_ssize_t d = xidx.shape[1]
    cdef long long n = roots.shape[0]
    cdef Py_ssize_t i, p, a
    cdef long long ph
    cdef double complex acc
    out = np.empty(m, dtype=np.complex128)
    cdef double complex[::1] o = out
    with nogil:
        for i in range(m):
            acc = 0
            for p in range(npts):
                if fhat[p] == 0:
                    continue
                ph = 0
                for a in range(d):
                    ph += xidx[i, a] * kidx[p, a]
                acc = acc + rows[i, p] * roots[ph % n] * fhat[p]
            o[i] = acc
    return out


def phase_adjoint(const double complex[:, ::1] rows,
                  const double complex[::1] g,
                  const long long[:, ::1] xidx,
                  const long long[:, ::1] kidx,
                  const double complex[::1] roots,
                  double complex[::1] acc):
    """acc[p] += sum_i conj(rows[i, p]) * conj(roots[(xidx[i] . kidx[p]) mod n]) * g[i]."""
    cdef Py_ssize_t m = rows.shape[0]
    cdef Py_ssize_t npts = rows.shape[1]
    cdef Py_ssize_t d = xidx.shape[1]
    cdef long long n = roots.shape[0]
    cdef Py_ssize_t i, p, a
    cdef long long ph
    cdef double complex gi, r
    with nogil:
        for i in range(m):
            gi = g[i]
            if gi == 0:
                continue
            for p in range(npts):
                ph = 0
                for a in range(d):
                    ph += xidx[i, a] * kidx[p, a]
                r = rows[i, p] * roots[ph % n]
                acc[p] = acc[p] + (r.real - 1j * r.imag) * gi


def dyadic_window_max(const double[::1] a, Py_ssize_t n):
    """Largest dyadic-window average of a 1D periodic sample containing each point."""
    cdef Py_ssize_t i, j, w, nw
    cdef double s
    best = np.array(a, dtype=np.float64, copy=True)
    cdef double[::1] b = best
    w = 1
    while w < n:
        w *= 2
        nw = n // w
        for j in range(nw):
            s = 0
            for i in range(j * w, (j + 1) * w):
                s += a[i]
            s /= w
            for i in range(j * w, (j + 1) * w):
                if s > b[i]:
                    b[i] = s
    return best
