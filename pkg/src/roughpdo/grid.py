"""Grid functions on the torus [0, 1)^n and the normalized discrete Fourier transform.

The forward transform carries the 1/N^n factor,

    fhat(xi) = N^{-n} sum_i f(x_i) e^{-2 pi i x_i . xi},

so that lattice sums over xi play the role of the integral d xi and the
inverse transform is a plain sum over the frequency lattice.  Spectra are
stored in numpy's FFT order; ``frequencies`` gives the integer frequency of
every slot.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def _check_shape(values: np.ndarray, n: int, dim: int) -> None:
    if dim not in (1, 2):
        raise ValueError(f"dim must be 1 or 2, got {dim}")
    if not is_power_of_two(n):
        raise ValueError(f"samples per axis must be a power of two, got {n}")
    if values.shape != (n,) * dim:
        raise ValueError(f"expected shape {(n,) * dim}, got {values.shape}")


@dataclass(frozen=True)
class GridFn:
    """Complex samples f(x_i), x_i = i / N, on a uniform torus grid."""

    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.complex128)
        object.__setattr__(self, "values", values)
        _check_shape(values, values.shape[0] if values.ndim else 0, values.ndim)

    @property
    def dim(self) -> int:
        return self.values.ndim

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @classmethod
    def from_function(cls, func, n: int, dim: int = 1) -> "GridFn":
        """Sample ``func`` on the grid; in 2D it receives two coordinate arrays."""
        x = np.arange(n) / n
        if dim == 1:
            return cls(np.asarray(func(x), dtype=np.complex128) * np.ones(n))
        x1, x2 = np.meshgrid(x, x, indexing="ij")
        return cls(np.asarray(func(x1, x2), dtype=np.complex128) * np.ones((n, n)))

    @classmethod
    def tone(cls, k, n: int, dim: int = 1) -> "GridFn":
        """e^{2 pi i k . x} for an integer frequency (tuple in 2D)."""
        k = np.atleast_1d(k)
        if dim == 1:
            return cls.from_function(lambda x: np.exp(2j * np.pi * k[0] * x), n)
        return cls.from_function(lambda x1, x2: np.exp(2j * np.pi * (k[0] * x1 + k[1] * x2)), n, 2)

    def __add__(self, other: "GridFn") -> "GridFn":
        return GridFn(self.values + other.values)

    def __sub__(self, other: "GridFn") -> "GridFn":
        return GridFn(self.values - other.values)

    def __mul__(self, c) -> "GridFn":
        return GridFn(self.values * c)

    __rmul__ = __mul__


@dataclass(frozen=True)
class Spectrum:
    """Fourier coefficients on the integer lattice {-N/2, ..., N/2-1}^n (FFT order)."""

    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=np.complex128)
        object.__setattr__(self, "coeffs", coeffs)
        _check_shape(coeffs, coeffs.shape[0] if coeffs.ndim else 0, coeffs.ndim)

    @property
    def dim(self) -> int:
        return self.coeffs.ndim

    @property
    def n(self) -> int:
        return self.coeffs.shape[0]

    def at(self, k) -> complex:
        """Coefficient at the integer frequency ``k`` (int, or pair in 2D)."""
        idx = tuple(int(v) % self.n for v in np.atleast_1d(k))
        return complex(self.coeffs[idx])


def frequencies(n: int, dim: int = 1):
    """Integer frequencies of the FFT slots: an array in 1D, a pair of arrays in 2D."""
    k = np.fft.fftfreq(n, 1.0 / n).astype(np.int64)
    if dim == 1:
        return k
    return tuple(np.meshgrid(k, k, indexing="ij"))


def frequency_radius(n: int, dim: int = 1) -> np.ndarray:
    """|xi| for every lattice slot."""
    if dim == 1:
        return np.abs(frequencies(n)).astype(float)
    k1, k2 = frequencies(n, 2)
    return np.hypot(k1, k2)


def forward_transform(f: GridFn) -> Spectrum:
    return Spectrum(np.fft.fftn(f.values) / f.n**f.dim)


def inverse_transform(s: Spectrum) -> GridFn:
    return GridFn(np.fft.ifftn(s.coeffs) * s.n**s.dim)


def lp_norm(f: GridFn, p: float) -> float:
    """(N^{-n} sum |f|^p)^{1/p}, or max |f| for p = inf."""
    if not p >= 1:
        raise ValueError(f"p must be >= 1, got {p}")
    a = np.abs(f.values)
    if np.isinf(p):
        return float(a.max())
    return float(np.mean(a**p) ** (1.0 / p))


def inner(f: GridFn, g: GridFn) -> complex:
    """N^{-n} sum f conj(g)."""
    if f.values.shape != g.values.shape:
        raise ValueError(f"shape mismatch {f.values.shape} vs {g.values.shape}")
    return complex(np.vdot(g.values, f.values) / f.values.size)
