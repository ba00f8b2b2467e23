"""Spherical-cap kernels on the 2D torus, their decay, and cone partitions.

K_{l,theta}(x) = sum_xi phi(2^l |xi/|xi| - theta|) phi(|xi| / 2^k0) e^{2 pi i x.xi}

is the periodized inverse transform of an angular cap on the annulus.  Its
envelope decays on the unit scale 2^{-k0} along theta and on the longer
scale 2^{l-k0} across theta.
"""

from __future__ import annotations

import csv
import json
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .gallery import lattice_polar
from .grid import GridFn, lp_norm
from .lp_decomp import CUTOFF


@dataclass(frozen=True)
class CapKernel:
    l: int
    theta: float
    k0: int
    samples: GridFn
    multiplier: np.ndarray


def _check_cap(l: int, k0: int, n: int) -> None:
    if not 1 <= 2**k0 <= n // 16:
        raise ValueError(f"annulus center 2^{k0} must satisfy 2 <= 2^k0 <= N/16 = {n // 16}")
    if not 0 <= l <= k0 + 1:
        raise ValueError(f"cap scale l={l} is out of range 0..k0+1 = {k0 + 1}")


def cap_multiplier(l: int, theta: float, k0: int, n: int) -> np.ndarray:
    """phi(2^l |omega - theta|) phi(|xi| / 2^k0) with the vector difference, shape (n, n)."""
    w1, w2, r = lattice_polar(n)
    d = np.hypot(w1 - np.cos(theta), w2 - np.sin(theta))
    return (CUTOFF.phi(2.0**l * d) * CUTOFF.phi(r / 2.0**k0)).reshape(n, n)


def cap_kernel(l: int, theta: float, k0: int, n: int) -> CapKernel:
    _check_cap(l, k0, n)
    mult = cap_multiplier(l, theta, k0, n)
    return CapKernel(l, float(theta), k0, GridFn(np.fft.ifft2(mult) * n * n), mult)


def kernel_l1(k: CapKernel) -> float:
    """Torus integral of |K|."""
    return lp_norm(k.samples, 1.0)


def _centered(n: int):
    c = np.fft.fftfreq(n, 1.0 / n)
    return np.meshgrid(c, c, indexing="ij")


def shell_profile(k: CapKernel, axis: str):
    """Dyadic shell maxima of |K| along theta or across it, distances in grid cells.

    Points are taken from a strip of half-width one cell around the chosen
    axis through the origin, out to half the period.
    """
    n = k.samples.n
    c1, c2 = _centered(n)
    e = np.array([np.cos(k.theta), np.sin(k.theta)])
    along = c1 * e[0] + c2 * e[1]
    across = -c1 * e[1] + c2 * e[0]
    t, s = (along, across) if axis == "along" else (across, along)
    strip = (np.abs(s) <= 1.0) & (np.abs(t) <= n / 2)
    dist = np.abs(t[strip])
    vals = np.abs(k.samples.values[strip])
    top = int(np.floor(np.log2(n / 2)))
    shells = []
    for j in range(0, top):
        sel = (dist >= 2**j) & (dist < 2 ** (j + 1))
        if sel.any():
            shells.append((j, float(vals[sel].max())))
    return shells, dist, vals


def onset_distance(k: CapKernel, axis: str, level: float = 0.5) -> float:
    """First distance in cells where the strip profile falls below ``level`` times its value at 0.

    The profile is the maximum of |K| over strip points binned to whole-cell
    distances; the crossing is linearly interpolated.
    """
    _, dist, vals = shell_profile(k, axis)
    bins = np.rint(dist).astype(int)
    prof = np.zeros(bins.max() + 1)
    np.maximum.at(prof, bins, vals)
    target = level * prof[0]
    below = np.nonzero(prof < target)[0]
    if below.size == 0:
        return float(prof.size - 1)
    i = below[0]
    return float(i - 1 + (prof[i - 1] - target) / (prof[i - 1] - prof[i]))


@dataclass(frozen=True)
class DecayCertificate:
    l: int
    theta: float
    n_exp: float
    along_exponent: float | None
    across_exponent: float | None
    along_onset: float
    across_onset: float
    constant: float
    passed: bool
    flags: tuple

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2)


def _fit_exponent(shells, start: float, floor: float):
    pts = [(j, v) for j, v in shells if 2**j >= start and v > floor]
    if len(pts) < 2:
        return None, 0.0
    j = np.array([p[0] for p in pts], dtype=float)
    v = np.log2([p[1] for p in pts])
    slope, icpt = np.polyfit(j, v, 1)
    return float(-slope), float(2.0**icpt)


def decay_certificate(k: CapKernel, n_exp: float = 2.0) -> DecayCertificate:
    """Fit decay exponents of the shell maxima along and across theta.

    The along fit starts at the unit scale N / 2^k0 cells, the across fit
    at 2^l times that.  A fit with fewer than two usable shells (kernel
    below 1e-14 of its peak, or past half the period) passes with a flag.
    """
    n = k.samples.n
    peak = float(np.abs(k.samples.values).max())
    floor = 1e-14 * peak
    unit = n / 2.0**k.k0
    along, c_along = _fit_exponent(shell_profile(k, "along")[0], unit, floor)
    across, c_across = _fit_exponent(shell_profile(k, "across")[0], unit * 2**k.l, floor)
    flags = []
    if along is None:
        flags.append("along: insufficient dynamic range")
    if across is None:
        flags.append("across: insufficient dynamic range")
    passed = (along is None or along >= n_exp) and (across is None or across >= n_exp)
    return DecayCertificate(k.l, k.theta, n_exp, along, across, onset_distance(k, "along"),
                            onset_distance(k, "across"), max(c_along, c_across) / peak if peak else 0.0,
                            bool(passed), tuple(flags))


def write_shell_csv(k: CapKernel, path) -> Path:
    path = Path(path)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["shell", "axis", "max_abs"])
        for axis in ("along", "across"):
            for j, v in shell_profile(k, axis)[0]:
                writer.writerow([j, axis, v])
    return path


@dataclass(frozen=True)
class UniformityRecord:
    table: dict
    max: float
    min: float
    ratio: float

    def passes(self, baseline: float | None = None) -> bool:
        ok = self.ratio <= 4.0
        return ok and (baseline is None or self.max <= baseline)


def l1_uniformity(l_range, theta_samples, k0: int, n: int) -> UniformityRecord:
    table = {}
    for l in l_range:
        for th in theta_samples:
            table[f"{l}:{th:.6f}"] = kernel_l1(cap_kernel(l, th, k0, n))
    vals = np.array(list(table.values()))
    return UniformityRecord(table, float(vals.max()), float(vals.min()), float(vals.max() / vals.min()))


def cone_centers(l: int) -> np.ndarray:
    count = 1 if l == 0 else 3 * 2**l
    return 2 * np.pi * np.arange(count) / count


def cone_partition(l: int, n: int) -> list:
    """Angular bumps chi(2^l |omega - theta_m| / 1.25) normalized to sum to 1 off the origin."""
    if l < 0 or 3 * 2**l > n:
        raise ValueError(f"cone scale l={l} too fine for N={n}")
    w1, w2, r = lattice_polar(n)
    if l == 0:
        one = np.where(r > 0, 1.0, 0.0).reshape(n, n)
        return [one]
    raw = []
    for th in cone_centers(l):
        d = np.hypot(w1 - np.cos(th), w2 - np.sin(th))
        raw.append(CUTOFF.chi(2.0**l * d / 1.25))
    raw = np.array(raw)
    total = raw.sum(axis=0)
    safe = np.where(total > 0, total, 1.0)
    return [(b / safe * (r > 0)).reshape(n, n) for b in raw]


def cone_overlap(parts) -> int:
    return int(np.max(np.sum(np.array(parts) > 0, axis=0)))


def _project(mult: np.ndarray, g: np.ndarray) -> np.ndarray:
    return np.fft.ifft2(mult * np.fft.fft2(g))


def cone_lp_sum_check(l: int, g, p: float, k0: int) -> float:
    """Ratio in the cone-multiplier inequalities.

    With a list of functions g_m and p <= 2:
    ||sum_m P_m g_m||_p / (sum_m ||g_m||_p^p)^{1/p}.
    With a single g and p >= 2:
    (sum_m ||P_m g||_p^p)^{1/p} / ||g||_p  (max over m for p = inf).
    P_m multiplies by the m-th cone bump times the annulus phi(|xi| / 2^k0).
    """
    if isinstance(g, (list, tuple)):
        if not 1 <= p <= 2:
            raise ValueError(f"the summing direction needs 1 <= p <= 2, got {p}")
        n = g[0].n
        parts = cone_partition(l, n)
        if len(g) != len(parts):
            raise ValueError(f"expected {len(parts)} functions, got {len(g)}")
        ann = CUTOFF.phi(lattice_polar(n)[2] / 2.0**k0).reshape(n, n)
        total = sum(_project(b * ann, gm.values) for b, gm in zip(parts, g))
        den = sum(lp_norm(gm, p) ** p for gm in g) ** (1.0 / p)
        return lp_norm(GridFn(total), p) / den
    if p < 2:
        raise ValueError(f"the splitting direction needs p >= 2, got {p}")
    n = g.n
    ann = CUTOFF.phi(lattice_polar(n)[2] / 2.0**k0).reshape(n, n)
    norms = np.array([lp_norm(GridFn(_project(b * ann, g.values)), p) for b in cone_partition(l, n)])
    num = norms.max() if np.isinf(p) else np.sum(norms**p) ** (1.0 / p)
    return float(num / lp_norm(g, p))
