"""Scale-invariant Besov-type quantities of symbols and related checks.

Every quantity has the shape

    sum_l 2^{l e} sup_x ||P_l^xi sigma(x, .)||_{L^p(d xi)},

with band 0 the low block.  The lattice carries counting measure times the
cell volume 2^{n scale}; with the dyadic weights this makes every quantity
independent of ``scale``.  Under this lattice normalization the constant
symbol has B2 = N^{n/2}.
"""

from __future__ import annotations

import csv
import itertools
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .lp_decomp import max_band, xi_bands
from .symbols import FieldSymbol, SeparableSymbol, Symbol, exp_symbol, lattice, product_symbol


def _row_norms(rows: np.ndarray, p: float) -> np.ndarray:
    a = np.abs(rows)
    if np.isinf(p):
        return a.max(axis=1)
    return np.sum(a**p, axis=1) ** (1.0 / p)


def band_sup_norms(sigma: Symbol, ps) -> np.ndarray:
    """max_x ||P_l^xi sigma(x, .)||_{l^p} (counting measure), shape (len(ps), bands)."""
    ps = list(ps)
    nb = max_band(sigma.n) + 1
    out = np.zeros((len(ps), nb))

    def absorb(rows):
        for l, proj in xi_bands(rows, sigma.n, sigma.dim):
            for k, p in enumerate(ps):
                out[k, l] = max(out[k, l], _row_norms(proj, p).max())

    if isinstance(sigma, SeparableSymbol):
        projected = [proj for _, proj in xi_bands(sigma.xi_factors, sigma.n, sigma.dim)]
        step = sigma.chunk_rows()
        for s in range(0, sigma.size, step):
            a = sigma.x_factors[:, s: s + step].T
            for l, pb in enumerate(projected):
                rows = a @ pb
                for k, p in enumerate(ps):
                    out[k, l] = max(out[k, l], _row_norms(rows, p).max())
    elif isinstance(sigma, FieldSymbol):
        values = np.unique(sigma.field)
        step = sigma.chunk_rows()
        for s in range(0, values.size, step):
            absorb(sigma.profile(values[s: s + step]))
    else:
        for _, rows in sigma.iter_rows():
            absorb(rows)
    return out


def _measure(sigma: Symbol, p: float) -> float:
    """Cell volume factor 2^{n scale / p} for the L^p(d xi) norm."""
    return 1.0 if np.isinf(p) else 2.0 ** (sigma.dim * sigma.scale / p)


def _band_rows(sigma: Symbol, sup_norms: np.ndarray, exponent: float, p: float):
    rows = []
    for l, s in enumerate(sup_norms):
        weight = 2.0 ** ((l - sigma.scale) * exponent)
        norm = float(s) * _measure(sigma, p)
        rows.append({"l": l, "weight": weight, "sup_x_norm": norm, "term": weight * norm})
    return rows


def _total(rows) -> float:
    return float(sum(r["term"] for r in rows))


def besov_bands(sigma: Symbol, p: float, exponent: float):
    """Per-band table for weight 2^{l exponent} and l^p norms in xi."""
    (sup,) = band_sup_norms(sigma, [p])
    return _band_rows(sigma, sup, exponent, p)


def theorem1_quantity(sigma: Symbol, bands: bool = False):
    """B2 = sum_l 2^{l n/2} sup_x ||P_l^xi sigma(x, .)||_2."""
    rows = besov_bands(sigma, 2.0, sigma.dim / 2.0)
    return (_total(rows), rows) if bands else _total(rows)


def weak11_quantity(sigma: Symbol, bands: bool = False):
    """B1 = sum_l 2^{l n} sup_x ||P_l^xi sigma(x, .)||_1."""
    rows = besov_bands(sigma, 1.0, float(sigma.dim))
    return (_total(rows), rows) if bands else _total(rows)


def lq_quantity(sigma: Symbol, q: float, bands: bool = False):
    """sum_l 2^{l n/q} sup_x ||P_l^xi sigma(x, .)||_q for 1 <= q <= 2."""
    if not 1.0 <= q <= 2.0:
        raise ValueError(f"q must lie in [1, 2], got {q}")
    rows = besov_bands(sigma, q, sigma.dim / q)
    return (_total(rows), rows) if bands else _total(rows)


# ---------------------------------------------------------------------------
# pointwise seminorms

_STENCILS = {
    0: {0: 1.0},
    1: {1: 0.5, -1: -0.5},
    2: {1: 1.0, 0: -2.0, -1: 1.0},
    3: {2: 0.5, 1: -1.0, -1: 1.0, -2: -0.5},
}


def _difference(rows: np.ndarray, order: int, axis: int) -> np.ndarray:
    """Centered second-order difference along a lattice axis (rows are (m, n, ...))."""
    out = np.zeros_like(rows)
    for shift, c in _STENCILS[order].items():
        # value at xi + shift: lattice slots are consecutive in FFT order
        out += c * np.roll(rows, -shift, axis=axis)
    return out


def multi_indices(dim: int, alpha_max: int):
    return [a for a in itertools.product(range(alpha_max + 1), repeat=dim) if sum(a) <= alpha_max]


def hormander_seminorm(sigma: Symbol, alpha_max: int) -> dict:
    """sup over x and |xi| >= 2 of |xi|^{|alpha|} |D_xi^alpha sigma| for |alpha| <= alpha_max."""
    if not 0 <= alpha_max <= 3:
        raise ValueError(f"alpha_max must lie in 0..3, got {alpha_max}")
    ks = lattice(sigma.n, sigma.dim)
    radius = np.sqrt(sum(k**2 for k in ks))
    keep = radius >= 2
    shape = (sigma.n,) * sigma.dim
    alphas = multi_indices(sigma.dim, alpha_max)
    best = {a: 0.0 for a in alphas}
    for _, rows in sigma.iter_rows():
        block = rows.reshape((-1,) + shape)
        for a in alphas:
            d = block
            for axis, order in enumerate(a):
                if order:
                    d = _difference(d, order, axis + 1)
            vals = np.abs(d.reshape(rows.shape))[:, keep] * radius[keep] ** sum(a)
            best[a] = max(best[a], float(vals.max(initial=0.0)))
    return best


# ---------------------------------------------------------------------------
# homogeneous and radial quantities


def homogeneous_quantity(q, p: float, bands: bool = False):
    """sum_l 2^{l/p'} sup_x ||P_l^theta q(x, .)||_{L^{p'}(S^1)} with p' = p/(p-1)."""
    from .sphere import circular_band_project, max_circular_band, sphere_lp_norm

    if p < 2:
        raise ValueError(f"p must be >= 2, got {p}")
    pp = 1.0 if np.isinf(p) else p / (p - 1.0)
    rows = []
    for l in range(max_circular_band(q.m) + 1):
        proj = circular_band_project(q, l).values
        norm = float(sphere_lp_norm(proj, pp).max())
        weight = 2.0 ** (l / pp)
        rows.append({"l": l, "weight": weight, "sup_x_norm": norm, "term": weight * norm})
    return (_total(rows), rows) if bands else _total(rows)


def radial_quantity(rho, bands: bool = False):
    """sum_l 2^{l/2} sup_x ||P_l rho(x, .)||_2 for radial profiles.

    ``rho`` has one row per grid point holding rho(x, r) at radii r = 0..R-1
    (R a power of two).  Each row is extended evenly to the 1D lattice
    {-R, ..., R-1} before the band split.
    """
    rho = np.atleast_2d(np.asarray(rho, dtype=np.complex128))
    radii = rho.shape[1]
    length = 2 * radii
    idx = np.abs(np.fft.fftfreq(length, 1.0 / length)).astype(int)
    idx[idx == radii] = radii - 1
    lines = rho[:, idx]
    sup = np.zeros(max_band(length) + 1)
    for l, proj in xi_bands(lines, length, 1):
        sup[l] = _row_norms(proj, 2.0).max()
    rows = [{"l": l, "weight": 2.0 ** (l / 2), "sup_x_norm": float(s), "term": 2.0 ** (l / 2) * float(s)}
            for l, s in enumerate(sup)]
    return (_total(rows), rows) if bands else _total(rows)


# ---------------------------------------------------------------------------
# algebra


@dataclass(frozen=True)
class AlgebraRecord:
    lhs: float
    rhs: float
    ratio: float


def algebra_check(s1: Symbol, s2: Symbol) -> AlgebraRecord:
    """B2(s1 s2) against B2(s1) B2(s2)."""
    lhs = theorem1_quantity(product_symbol(s1, s2))
    rhs = theorem1_quantity(s1) * theorem1_quantity(s2)
    return AlgebraRecord(lhs, rhs, lhs / rhs if rhs > 0 else float("inf"))


def exp_check(sigma: Symbol) -> AlgebraRecord:
    """B2(e^sigma) / B2(1) against exp(B2(sigma)); ``ratio`` is the exponent c it implies.

    c = log(B2(e^sigma) / B2(1)) / B2(sigma), so that
    B2(e^sigma) <= B2(1) exp(c B2(sigma)).
    """
    lhs = theorem1_quantity(exp_symbol(sigma))
    unit = float(sigma.n ** (sigma.dim / 2.0))
    b = theorem1_quantity(sigma)
    c = float(np.log(lhs / unit) / b) if b > 0 else 0.0
    return AlgebraRecord(lhs, float(unit * np.exp(b)), c)


# ---------------------------------------------------------------------------
# report


@dataclass
class BoundReport:
    tag: str
    n: int
    dim: int
    scale: int
    B2: float
    B1: float
    Bq: dict = field(default_factory=dict)
    hormander: dict = field(default_factory=dict)
    homogeneous_p: dict = field(default_factory=dict)
    radial: float | None = None
    empirical_norm: float | None = None
    bands: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def write_band_csv(self, path, name: str) -> Path:
        path = Path(path)
        with open(path, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=["l", "weight", "sup_x_norm", "term"])
            writer.writeheader()
            writer.writerows(self.bands[name])
        return path


def bound_report(sigma: Symbol, qs=(1.25, 1.5, 1.75), alpha_max: int = 2,
                 empirical_norm: float | None = None) -> BoundReport:
    ps = [2.0, 1.0, *qs]
    sup = band_sup_norms(sigma, ps)
    b2 = _band_rows(sigma, sup[0], sigma.dim / 2.0, 2.0)
    b1 = _band_rows(sigma, sup[1], float(sigma.dim), 1.0)
    bq = {str(q): _band_rows(sigma, sup[2 + k], sigma.dim / q, q) for k, q in enumerate(qs)}
    horm = {",".join(map(str, a)): v for a, v in hormander_seminorm(sigma, alpha_max).items()}
    bands = {"B2": b2, "B1": b1, **{f"Bq{q}": rows for q, rows in bq.items()}}
    return BoundReport(tag=sigma.tag, n=sigma.n, dim=sigma.dim, scale=sigma.scale, B2=_total(b2),
                       B1=_total(b1), Bq={q: _total(rows) for q, rows in bq.items()},
                       hormander=horm, empirical_norm=empirical_norm, bands=bands)
