"""Functions on the unit circle attached to grid points.

A homogeneous symbol q(x, xi/|xi|) on the 2D lattice is stored as samples
q[x_i, theta_j] with theta_j = 2 pi j / M.  Circular harmonics are the tones
e^{i k theta}, and band l collects |k| ~ 2^l through the same dyadic cutoff
used on the torus.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import is_power_of_two
from .lp_decomp import CUTOFF
from .symbols import DirectionField, FieldSymbol


def max_circular_band(m: int) -> int:
    """Largest band resolved by M angular samples, log2(M/8)."""
    if m < 8:
        raise ValueError(f"need at least 8 angular samples, got {m}")
    return int(np.log2(m)) - 3


@dataclass(frozen=True)
class SphereSymbol:
    """values[x, j] = q(x_i, theta_j); ``n_x`` grid points per axis in 2D."""

    values: np.ndarray
    n_x: int

    def __post_init__(self):
        v = np.atleast_2d(np.asarray(self.values, dtype=np.complex128))
        object.__setattr__(self, "values", v)
        if not is_power_of_two(v.shape[1]) or v.shape[1] < 8:
            raise ValueError(f"angular sample count must be a power of two >= 8, got {v.shape[1]}")
        if v.shape[0] != self.n_x**2:
            raise ValueError(f"expected {self.n_x ** 2} rows, got {v.shape[0]}")
        if not np.all(np.isfinite(v)):
            raise ValueError("sphere symbol has non-finite values")

    @property
    def m(self) -> int:
        return self.values.shape[1]

    @property
    def angles(self) -> np.ndarray:
        return 2 * np.pi * np.arange(self.m) / self.m

    @classmethod
    def from_function(cls, func, field: DirectionField, n_x: int, m: int) -> "SphereSymbol":
        """q(x, theta) = func(theta - u(x)) for an angle field u."""
        theta = 2 * np.pi * np.arange(m) / m
        return cls(func(theta[None, :] - field.values[:, None]), n_x)


def directional_sphere_symbol(delta: float, field: DirectionField, n_x: int, m: int) -> SphereSymbol:
    """psi(cos(theta - u(x)) / delta), the angular part of the directional symbol."""
    from .gallery import psi_profile

    if delta <= 0:
        raise ValueError(f"delta must be positive, got {delta}")
    return SphereSymbol.from_function(lambda t: psi_profile(np.cos(t) / delta), field, n_x, m)


def _circular_freqs(m: int) -> np.ndarray:
    return np.abs(np.fft.fftfreq(m, 1.0 / m))


def circular_band_project(q: SphereSymbol, l: int) -> SphereSymbol:
    """Band-pass each row in the circular harmonic index (low block at l = 0)."""
    if not 0 <= l <= max_circular_band(q.m):
        raise ValueError(f"band {l} out of range [0, {max_circular_band(q.m)}]")
    mult = CUTOFF.band(_circular_freqs(q.m), l)
    return SphereSymbol(np.fft.ifft(np.fft.fft(q.values, axis=1) * mult, axis=1), q.n_x)


def sphere_lp_norm(rows, p: float):
    """Trapezoid L^p(S^1) norm of each row (scalar for a single row)."""
    if not p >= 1:
        raise ValueError(f"p must be >= 1, got {p}")
    rows = np.asarray(rows)
    a = np.abs(np.atleast_2d(rows))
    if np.isinf(p):
        out = a.max(axis=1)
    else:
        out = (np.sum(a**p, axis=1) * (2 * np.pi / a.shape[1])) ** (1.0 / p)
    return float(out[0]) if rows.ndim == 1 else out


def angular_derivative(rows) -> np.ndarray:
    """Centered difference in theta, periodic."""
    rows = np.asarray(rows)
    h = 2 * np.pi / rows.shape[-1]
    return (np.roll(rows, -1, axis=-1) - np.roll(rows, 1, axis=-1)) / (2 * h)


def w11_norm(rows):
    """||q||_{L^1(S^1)} + ||dq/dtheta||_{L^1(S^1)} with a centered difference."""
    return sphere_lp_norm(rows, 1.0) + sphere_lp_norm(angular_derivative(rows), 1.0)


def sphere_bernstein_ratio(row, l: int, p: float, q_exp: float) -> float:
    """||P_l row||_{q} / (2^{l (1/p - 1/q)} ||P_l row||_p)."""
    if not 1 < p < q_exp < np.inf:
        raise ValueError(f"need 1 < p < q < inf, got p={p}, q={q_exp}")
    row = np.asarray(row, dtype=np.complex128)
    proj = circular_band_project(SphereSymbol(row[None, :], 1), l).values[0]
    den = sphere_lp_norm(proj, p)
    if den <= 1e-13 * max(sphere_lp_norm(row, p), 1e-300):
        return 0.0
    return sphere_lp_norm(proj, q_exp) / (2.0 ** (l * (1.0 / p - 1.0 / q_exp)) * den)


def lift_to_symbol(q: SphereSymbol, k0: int, mode: str = "nearest") -> FieldSymbol:
    """sigma(x, xi) = q(x, angle(xi)) phi(|xi| / 2^k0) on the n_x^2 lattice.

    ``mode="nearest"`` picks the closest sampled angle; ``mode="fourier"``
    evaluates the trigonometric interpolant of each row at the exact angle.
    """
    from .gallery import annulus, lattice_polar

    if q.m < 8 * 2**k0:
        raise ValueError(f"M={q.m} angular samples are too few for 2^k0 = {2**k0}; need >= {8 * 2**k0}")
    n = q.n_x
    w1, w2, r = lattice_polar(n)
    ann = annulus(n, k0)
    live = np.nonzero(ann)[0]
    ang = np.mod(np.arctan2(w2[live], w1[live]), 2 * np.pi)
    if mode == "nearest":
        idx = np.rint(ang * q.m / (2 * np.pi)).astype(int) % q.m

        def sample(rows):
            return rows[:, idx]
    elif mode == "fourier":
        k = np.fft.fftfreq(q.m, 1.0 / q.m)
        # symmetric treatment of the Nyquist harmonic keeps real rows real
        k_half = np.where(np.abs(k) == q.m // 2, 0.0, k)
        basis = np.exp(1j * np.outer(k_half, ang)) / q.m
        nyq = np.abs(k) == q.m // 2
        basis[nyq] = np.cos(q.m // 2 * ang)[None, :] / q.m

        def sample(rows):
            return np.fft.fft(rows, axis=1) @ basis
    else:
        raise ValueError(f"unknown mode {mode!r}")

    def profile(index):
        rows = q.values[np.asarray(index, dtype=int)]
        out = np.zeros((rows.shape[0], n * n), dtype=np.complex128)
        out[:, live] = sample(rows) * ann[live]
        return out

    return FieldSymbol(np.arange(n * n), profile, n, 2, tag="lift", params={"k0": k0, "mode": mode})
