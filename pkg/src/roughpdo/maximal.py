"""Dyadic maximal function, band envelopes and thin-multiplier maximal operators."""

from __future__ import annotations

import csv
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import _backend
from .grid import GridFn, forward_transform, frequencies
from .lp_decomp import CUTOFF, max_band, project_band
from .gallery import lattice_polar

#: Largest number of multipliers applied in one batched inverse FFT.
BATCH = 64


def hl_maximal(f: GridFn) -> GridFn:
    """Largest average of |f| over dyadic windows (cubes in 2D) containing each point."""
    a = np.abs(f.values)
    if f.dim == 1:
        return GridFn(_backend.kernels.dyadic_window_max(np.ascontiguousarray(a), f.n))
    best = a.copy()
    w = 1
    while w < f.n:
        w *= 2
        k = f.n // w
        means = a.reshape(k, w, k, w).mean(axis=(1, 3))
        np.maximum(best, np.repeat(np.repeat(means, w, axis=0), w, axis=1), out=best)
    return GridFn(best)


def band_sup(f: GridFn) -> GridFn:
    """Pointwise max over bands (low block included) of |P_l f|."""
    best = np.zeros(f.values.shape)
    for l in range(max_band(f.n) + 1):
        np.maximum(best, np.abs(project_band(f, l).values), out=best)
    return GridFn(best)


def _check_band_limited(f: GridFn) -> None:
    c = np.abs(forward_transform(f).coeffs)
    ks = frequencies(f.n, f.dim)
    r = np.abs(ks) if f.dim == 1 else np.hypot(*ks)
    if c[r > f.n / 4].max(initial=0.0) > 1e-12 * max(c.max(), 1e-300):
        raise ValueError("f must be band-limited to |xi| <= N/4")


def carleson_u_grid(m: int, n: int, low: float = 0.5) -> np.ndarray:
    """Log-spaced dilations with ratio 1 + 2^{-m-2} covering [low, N/2]."""
    ratio = 1.0 + 2.0 ** (-m - 2)
    count = int(np.ceil(np.log(n / 2 / low) / np.log(ratio))) + 1
    return low * ratio ** np.arange(count)


def _sup_passes(fhat: np.ndarray, multipliers, shape) -> np.ndarray:
    """Pointwise max of |inverse(mult * fhat)| over a stream of multiplier batches."""
    best = np.zeros(shape)
    axes = tuple(range(1, len(shape) + 1))
    size = fhat.size
    for mult in multipliers:
        vals = np.abs(np.fft.ifftn(mult * fhat[None], axes=axes) * size)
        np.maximum(best, vals.max(axis=0), out=best)
    return best


def carleson_thin_max(m: int, f: GridFn, u_samples) -> GridFn:
    """sup_u |sum_xi phi(2^m (1 - xi^2/u^2)) e^{2 pi i xi x} fhat(xi)| over a u grid."""
    if f.dim != 1:
        raise ValueError("Carleson maximal operator is one-dimensional")
    u = np.sort(np.asarray(u_samples, dtype=float))
    if np.any(u <= 0):
        raise ValueError("u samples must be positive")
    if u.size > 1 and np.max(u[1:] / u[:-1]) > 1.0 + 2.0 ** (-m - 2) + 1e-12:
        raise ValueError(f"u grid ratio exceeds 1 + 2^-{m + 2}; thin annulus under-resolved")
    _check_band_limited(f)
    xi = frequencies(f.n).astype(float)
    fhat = forward_transform(f).coeffs

    def batches():
        for s in range(0, u.size, BATCH):
            ub = u[s: s + BATCH, None]
            yield CUTOFF.phi(2.0**m * (1.0 - xi[None, :] ** 2 / ub**2))

    return GridFn(_sup_passes(fhat, batches(), f.values.shape))


def circle_angle_grid(m: int) -> np.ndarray:
    """Equispaced directions with step at most 2^{-m-2}."""
    count = int(np.ceil(2 * np.pi / 2.0 ** (-m - 2)))
    return 2 * np.pi * np.arange(count) / count


def thin_circle_multiplier(m: int, angle: float, n: int, k0: int) -> np.ndarray:
    """phi(2^m <u, xi/|xi|>) phi(|xi| / 2^k0) on the (n, n) lattice."""
    w1, w2, r = lattice_polar(n)
    mult = CUTOFF.phi(2.0**m * (np.cos(angle) * w1 + np.sin(angle) * w2)) * CUTOFF.phi(r / 2.0**k0)
    return mult.reshape(n, n)


def thin_circle_max(m: int, f: GridFn, u_angles, k0: int) -> GridFn:
    """sup_u |T_{m,u} f| over the sampled directions."""
    if f.dim != 2:
        raise ValueError("thin-circle maximal operator is two-dimensional")
    if not 1 <= 2**k0 <= f.n // 16:
        raise ValueError(f"annulus center 2^{k0} is not resolvable on N={f.n}")
    ang = np.sort(np.mod(np.asarray(u_angles, dtype=float), 2 * np.pi))
    gaps = np.diff(np.concatenate([ang, ang[:1] + 2 * np.pi]))
    if gaps.max() > 2.0 ** (-m - 2) + 1e-12:
        raise ValueError(f"angle grid step exceeds 2^-{m + 2}")
    _check_band_limited(f)
    fhat = forward_transform(f).coeffs
    w1, w2, r = (a.reshape(f.n, f.n) for a in lattice_polar(f.n))
    ann = CUTOFF.phi(r / 2.0**k0)

    def batches():
        step = max(1, BATCH // 8)
        for s in range(0, ang.size, step):
            a = ang[s: s + step, None, None]
            yield CUTOFF.phi(2.0**m * (np.cos(a) * w1 + np.sin(a) * w2)) * ann

    return GridFn(_sup_passes(fhat, batches(), f.values.shape))


@dataclass(frozen=True)
class Domination:
    constant: float
    flagged: int


def domination_check(lhs: GridFn, rhs: GridFn, tol: float = 1e-12) -> Domination:
    """Smallest C with |lhs| <= C |rhs| where |rhs| > tol; points with rhs ~ 0 < lhs are flagged."""
    a, b = np.abs(lhs.values), np.abs(rhs.values)
    live = b > tol
    flagged = int(np.sum(~live & (a > tol)))
    c = float(np.max(a[live] / b[live], initial=0.0))
    return Domination(c, flagged)


@dataclass
class MaximalReport:
    values: list
    dominating: list
    constant: float
    u_grid: list
    per_m: list = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2)

    def write_constants_csv(self, path) -> Path:
        path = Path(path)
        with open(path, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=["m", "measured_C", "u_grid_size"])
            writer.writeheader()
            writer.writerows(self.per_m)
        return path


def carleson_domination(m: int, f: GridFn, u_samples=None) -> Domination:
    """Constant in |T_m f| <= C M(sup_k |P_k f|) for one f."""
    u = carleson_u_grid(m, f.n) if u_samples is None else u_samples
    return domination_check(carleson_thin_max(m, f, u), hl_maximal(band_sup(f)))
