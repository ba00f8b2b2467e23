"""Explicit symbol families.

Every constructor places its frequency content at a dyadic center 2^{k0}
chosen inside the lattice and checks that the result vanishes for
|xi| > N/4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grid import GridFn, Spectrum, forward_transform, frequencies, inverse_transform
from .lp_decomp import CUTOFF, plateau_bump, smooth_step, xi_bands
from .symbols import DirectionField, FieldSymbol, SeparableSymbol, Symbol, lattice, multiplier_symbol

#: First term of the lacunary counterexample sum.
J_MIN = 8


def lattice_polar(n: int):
    """(omega_1, omega_2, |xi|) on the flattened 2D lattice; omega = 0 at the origin."""
    k1, k2 = lattice(n, 2)
    r = np.hypot(k1, k2)
    safe = np.where(r == 0, 1.0, r)
    return k1 / safe, k2 / safe, r


def annulus(n: int, k0: int) -> np.ndarray:
    """phi(|xi| / 2^k0) on the flattened 2D lattice."""
    _, _, r = lattice_polar(n)
    return CUTOFF.phi(r / 2.0**k0)


def _check_center(k0: int, n: int) -> None:
    if not 1 <= 2**k0 <= n // 16:
        raise ValueError(f"annulus center 2^{k0} must satisfy 2 <= 2^k0 <= N/16 = {n // 16}")


def assert_band_limited(sigma: Symbol, rows: int = 64, tol: float = 0.0) -> None:
    """Raise if sampled rows carry any mass at |xi| > N/4."""
    outside = np.zeros(sigma.size, dtype=bool)
    for k in lattice(sigma.n, sigma.dim):
        outside |= np.abs(k) > sigma.n / 4
    step = max(1, sigma.size // rows)
    sample = sigma.rows(0, sigma.size)[::step] if sigma.size <= rows else np.vstack(
        [sigma.row_at(i) for i in range(0, sigma.size, step)])
    if np.abs(sample[:, outside]).max(initial=0.0) > tol:
        raise ValueError(f"{sigma.tag}: symbol has energy beyond |xi| = N/4")


# ---------------------------------------------------------------------------
# lacunary counterexample


def counterexample_window(t):
    """1 on 3/4 <= |t| <= 5/4, supported in 5/8 < |t| < 11/8."""
    return plateau_bump(t, inner=0.625, flat_lo=0.75, flat_hi=1.25, outer=1.375)


def _ce_coefficient(j, delta, sign):
    return float(j) ** (-(0.5 + sign * delta))


def counterexample_symbol(delta: float, j_max: int, n: int) -> SeparableSymbol:
    """sum_{j=8}^{j_max} j^{-(1/2-delta)} e^{-2 pi i 2^j x} w(2^{-j} xi)."""
    if not 0 < delta < 0.5:
        raise ValueError(f"delta must lie in (0, 1/2), got {delta}")
    if j_max < J_MIN:
        raise ValueError(f"j_max must be >= {J_MIN}, got {j_max}")
    if 11 * 2**j_max > 2 * n:
        raise ValueError(f"window of 2^{j_max} reaches past N/4 for N={n}; need 2^j_max <= N/8")
    x = np.arange(n) / n
    (xi,) = lattice(n, 1)
    js = np.arange(J_MIN, j_max + 1)
    a = np.array([_ce_coefficient(j, delta, -1) * np.exp(-2j * np.pi * (2**j * x % 1.0)) for j in js])
    b = np.array([counterexample_window(xi / 2.0**j) for j in js])
    return SeparableSymbol(a, b, dim=1, tag="counterexample",
                           params={"delta": delta, "j_max": j_max})


def counterexample_f0(n: int, radius: int = 16) -> GridFn:
    """Real even bump with spectrum chi(2 xi / radius), supported in |xi| <= radius."""
    if radius > 2**J_MIN / 10:
        raise ValueError(f"f0 spectrum radius {radius} exceeds 2^{J_MIN}/10")
    xi = frequencies(n).astype(float)
    return inverse_transform(Spectrum(CUTOFF.chi(2.0 * xi / radius)))


def _spectral_radius(f: GridFn, tol=1e-14) -> int:
    c = np.abs(forward_transform(f).coeffs)
    xi = np.abs(frequencies(f.n))
    live = c > tol * c.max()
    return int(xi[live].max()) if live.any() else 0


def counterexample_testfn(delta: float, n_terms: int, f0: GridFn) -> GridFn:
    """f_N = sum_{j=8}^{N_terms} j^{-(1/2+delta)} e^{+2 pi i 2^j x} f0 on the grid of f0."""
    if f0.dim != 1:
        raise ValueError("counterexample lives in one dimension")
    if n_terms < J_MIN or 2**n_terms > f0.n // 4:
        raise ValueError(f"n_terms={n_terms} does not fit a grid of {f0.n}")
    if _spectral_radius(f0) > 2**J_MIN / 10:
        raise ValueError("f0 spectrum must lie in |xi| <= 2^8/10")
    x = np.arange(f0.n) / f0.n
    mod = sum(_ce_coefficient(j, delta, +1) * np.exp(2j * np.pi * (2**j * x % 1.0))
              for j in range(J_MIN, n_terms + 1))
    return GridFn(mod * f0.values)


@dataclass(frozen=True)
class SparseSpectrum:
    """Finitely many Fourier coefficients at arbitrary integer frequencies.

    Frequencies are Python ints, so lacunary sums with carriers 2^100 are
    represented without a grid.
    """

    coeffs: dict

    def norm(self) -> float:
        """L^2 norm on the unit torus (Plancherel)."""
        return math.sqrt(sum(abs(c) ** 2 for c in self.coeffs.values()))

    @classmethod
    def from_grid(cls, f: GridFn, tol: float = 0.0) -> "SparseSpectrum":
        c = forward_transform(f).coeffs
        xi = frequencies(f.n)
        keep = np.abs(c) > tol
        return cls({int(k): complex(v) for k, v in zip(xi[keep], c[keep])})

    def to_grid(self, n: int) -> Spectrum:
        out = np.zeros(n, dtype=np.complex128)
        for k, v in self.coeffs.items():
            if not -n // 2 <= k < n // 2:
                raise ValueError(f"frequency {k} does not fit a grid of {n}")
            out[k % n] += v
        return Spectrum(out)

    def scaled_distance(self, other: "SparseSpectrum", scale: complex) -> float:
        keys = set(self.coeffs) | set(other.coeffs)
        return math.sqrt(sum(abs(self.coeffs.get(k, 0) - scale * other.coeffs.get(k, 0)) ** 2
                             for k in keys))


def counterexample_testfn_sparse(delta: float, n_terms: int, f0: GridFn) -> SparseSpectrum:
    """Spectrum of f_N with exact integer carriers 2^j (no grid bound on n_terms)."""
    c = np.abs(forward_transform(f0).coeffs)
    base = SparseSpectrum.from_grid(f0, tol=1e-14 * c.max())
    if max(abs(k) for k in base.coeffs) > 2**J_MIN / 10:
        raise ValueError("f0 spectrum must lie in |xi| <= 2^8/10")
    out = {}
    for j in range(J_MIN, n_terms + 1):
        c = _ce_coefficient(j, delta, +1)
        for k, v in base.coeffs.items():
            out[2**j + k] = out.get(2**j + k, 0) + c * v
    return SparseSpectrum(out)


def apply_counterexample_sparse(delta: float, j_max: int, f: SparseSpectrum) -> SparseSpectrum:
    """T_sigma f for the counterexample symbol, evaluated frequency by frequency.

    Each term maps the coefficient at xi to xi - 2^j with weight
    j^{-(1/2-delta)} w(2^{-j} xi); xi / 2^j is formed from the exact integer.
    """
    keys = list(f.coeffs)
    vals = np.array([f.coeffs[k] for k in keys])
    fk = np.array([float(k) for k in keys])
    out = {}
    for j in range(J_MIN, j_max + 1):
        w = counterexample_window(fk / 2.0**j) * _ce_coefficient(j, delta, -1)
        for idx in np.nonzero(w)[0]:
            key = keys[idx] - 2**j
            out[key] = out.get(key, 0) + w[idx] * vals[idx]
    return SparseSpectrum(out)


def harmonic_partial_sum(n_terms: int) -> float:
    """sum_{j=8}^{n_terms} 1/j, accumulated in exact rational arithmetic."""
    from fractions import Fraction

    return float(sum(Fraction(1, j) for j in range(J_MIN, n_terms + 1)))


def sobolev_threshold(delta: float) -> float:
    """Smallest admissible p for the counterexample: 2 + 4 delta / (1 - 2 delta)."""
    return 2.0 + 4.0 * delta / (1.0 - 2.0 * delta)


def lattice_sobolev_norm(row: np.ndarray, s: float, p: float) -> float:
    """Littlewood-Paley form of the W^{s,p} norm of a 1D lattice row.

    (sum_xi (sum_l (2^l / L)^{2s} |P_l row(xi)|^2)^{p/2})^{1/p} with unit
    lattice spacing; band l has conjugate frequency ~ 2^l / L.
    """
    length = row.shape[0]
    acc = np.zeros(length)
    for l, proj in xi_bands(row[None, :], length, 1):
        acc += (2.0**l / length) ** (2 * s) * np.abs(proj[0]) ** 2
    return float(np.sum(acc ** (p / 2)) ** (1.0 / p))


def window_sobolev_constant(p: float, length: int = 2**14, dilation: int = 2**7) -> float:
    """W^{1/p,p} norm of the counterexample window, by scale invariance at one dilation."""
    xi = np.fft.fftfreq(length, 1.0 / length)
    return lattice_sobolev_norm(counterexample_window(xi / dilation).astype(complex), 1.0 / p, p)


def counterexample_sobolev_quantity(delta: float, n_terms: int, p: float, constant=None) -> float:
    """W^{1/p,p}-type size of sigma(x, .) for the lacunary symbol.

    The pieces w(2^{-j} .) sit in disjoint dyadic regions, so the norm
    splits as (sum_j j^{-(1/2-delta) p})^{1/p} times the norm of one window,
    which is dilation invariant.
    """
    if p <= sobolev_threshold(delta):
        raise ValueError(f"p={p} below the threshold {sobolev_threshold(delta):.4f}")
    w = window_sobolev_constant(p) if constant is None else constant
    total = sum(_ce_coefficient(j, delta, -1) ** p for j in range(J_MIN, n_terms + 1))
    return float(total ** (1.0 / p) * w)


# ---------------------------------------------------------------------------
# thin multipliers


def carleson_thin_symbol(m: int, u: DirectionField, k0: int, n: int) -> FieldSymbol:
    """phi(2^m (1 - xi^2 / u(x)^2)) phi(xi / 2^k0) with u(x) in (1/4, 4) 2^k0."""
    _check_center(k0, n)
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if u.kind != "dilation":
        raise ValueError("Carleson symbol needs a dilation field")
    lo, hi = 2.0 ** (k0 - 2), 2.0 ** (k0 + 2)
    if np.any((u.values <= lo) | (u.values >= hi)):
        raise ValueError(f"u must lie in ({lo}, {hi})")
    (xi,) = lattice(n, 1)
    cut = CUTOFF.phi(xi / 2.0**k0)

    def profile(uv):
        uv = np.asarray(uv, dtype=float)[:, None]
        return CUTOFF.phi(2.0**m * (1.0 - xi[None, :] ** 2 / uv**2)) * cut[None, :]

    return FieldSymbol(u.values, profile, n, 1, tag="carleson_thin", params={"m": m, "k0": k0})


def _angle_profile(n: int, k0: int, func):
    w1, w2, _ = lattice_polar(n)
    ann = annulus(n, k0)

    def profile(angles):
        a = np.asarray(angles, dtype=float)[:, None]
        dot = np.cos(a) * w1[None, :] + np.sin(a) * w2[None, :]
        return func(dot) * ann[None, :]

    return profile


def thin_circle_symbol(m: int, u: DirectionField, k0: int, n: int) -> FieldSymbol:
    """phi(2^m <u(x), xi/|xi|>) phi(|xi| / 2^k0) on the 2D lattice."""
    _check_center(k0, n)
    if not 0 <= m <= k0:
        raise ValueError(f"cap scale m={m} is not resolvable at 2^k0 = {2**k0}")
    if u.kind != "angle":
        raise ValueError("thin-circle symbol needs an angle field")
    profile = _angle_profile(n, k0, lambda d: CUTOFF.phi(2.0**m * d))
    return FieldSymbol(u.values, profile, n, 2, tag="thin_circle", params={"m": m, "k0": k0})


def psi_profile(z):
    """Odd-looking plateau: -1 on (-inf, -1], +1 on [1, inf), smooth between."""
    return 2.0 * smooth_step((np.asarray(z, dtype=float) + 1.0) / 2.0) - 1.0


def directional_symbol(delta: float, u: DirectionField, k0: int, n: int) -> FieldSymbol:
    """psi(<u(x), xi/|xi|> / delta) phi(|xi| / 2^k0)."""
    if delta <= 0:
        raise ValueError(f"delta must be positive, got {delta}")
    _check_center(k0, n)
    if u.kind != "angle":
        raise ValueError("directional symbol needs an angle field")
    profile = _angle_profile(n, k0, lambda d: psi_profile(d / delta))
    return FieldSymbol(u.values, profile, n, 2, tag="directional", params={"delta": delta, "k0": k0})


def band_multiplier(j: int, n: int, dim: int = 1) -> SeparableSymbol:
    """x-independent phi(|xi| / 2^j)."""
    if 2 ** (j + 1) > n // 4:
        raise ValueError(f"band {j} reaches past N/4 for N={n}")
    if dim == 1:
        r = np.abs(lattice(n, 1)[0])
    else:
        r = lattice_polar(n)[2]
    return multiplier_symbol(CUTOFF.phi(r / 2.0**j), dim=dim, tag="band_multiplier", params={"j": j})


# ---------------------------------------------------------------------------
# random symbols


def _smooth_xi_row(n: int, rng, max_band: int) -> np.ndarray:
    """Random complex lattice row: conjugate content in bands <= max_band, cut at |xi| <= N/4."""
    (xi,) = lattice(n, 1)
    noise = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    a = np.abs(np.fft.fftfreq(n, 1.0 / n))
    smooth = np.fft.ifft(np.fft.fft(noise) * CUTOFF.chi(a / 2.0**max_band))
    smooth /= np.abs(smooth).max()
    return smooth * CUTOFF.chi(xi / (n / 8))


def random_symbol(n: int, rng, rank: int | None = None) -> SeparableSymbol:
    """1D symbol with rough random x-factors and random smooth xi-factors."""
    rank = int(rng.integers(1, 5)) if rank is None else rank
    top = int(np.log2(n)) - 2
    a = np.empty((rank, n), dtype=np.complex128)
    b = np.empty((rank, n), dtype=np.complex128)
    for r in range(rank):
        kind = rng.integers(3)
        if kind == 0:
            a[r] = rng.choice([-1.0, 1.0], size=n)
        elif kind == 1:
            a[r] = np.exp(2j * np.pi * rng.random(n))
        else:
            a[r] = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        b[r] = _smooth_xi_row(n, rng, int(rng.integers(0, top + 1)))
    return SeparableSymbol(a, b, dim=1, tag="random", params={"rank": rank})


def gallery_1d(n: int, rng) -> dict:
    """The deterministic-plus-seeded 1D gallery used by the bound sweeps."""
    from .symbols import constant_symbol

    out = {"constant": constant_symbol(n)}
    for j in range(1, int(np.log2(n)) - 3):
        out[f"band_multiplier_j{j}"] = band_multiplier(j, n)
    k0 = int(np.log2(n)) - 4
    for m in range(1, 5):
        u = DirectionField.random_dilation(n, 2.0**k0, rng, low=0.26, high=3.9)
        out[f"carleson_thin_m{m}"] = carleson_thin_symbol(m, u, k0, n)
    if n >= 2**11:
        out["counterexample"] = counterexample_symbol(0.1, int(np.log2(n)) - 3, n)
    signs = rng.choice([-1.0, 1.0], size=n)
    base = band_multiplier(max(1, k0 - 1), n)
    out["rough_sign"] = SeparableSymbol(signs[None, :], base.xi_factors, tag="rough_sign")
    return out
