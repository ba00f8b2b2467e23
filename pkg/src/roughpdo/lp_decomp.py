"""Dyadic cutoffs, Littlewood-Paley projections and Besov-type sums.

Band 0 is always the low block with multiplier chi(|xi|); band l >= 1 has
multiplier phi(2^{-l} |xi|) and lives on 2^{l-1} <= |xi| <= 2^{l+1}.  On an
N-grid the bands run over 0..log2(N/4), and for |xi| <= N/4 the multipliers
telescope to exactly 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import GridFn, Spectrum, forward_transform, frequency_radius, inverse_transform, lp_norm


def _bump(t):
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    pos = t > 0
    out[pos] = np.exp(-1.0 / t[pos])
    return out


def smooth_step(t):
    """C-infinity step: 0 for t <= 0, 1 for t >= 1."""
    b0 = _bump(t)
    return b0 / (b0 + _bump(1.0 - np.asarray(t, dtype=float)))


@dataclass(frozen=True)
class DyadicCutoff:
    """The pair (chi, phi) with phi(t) = chi(t) - chi(2t)."""

    def chi(self, t):
        return 1.0 - smooth_step(np.abs(t) - 1.0)

    def phi(self, t):
        t = np.asarray(t, dtype=float)
        return self.chi(t) - self.chi(2.0 * t)

    def band(self, r, l: int):
        """Multiplier of band ``l`` evaluated at radii ``r`` (low block for l = 0)."""
        if l == 0:
            return self.chi(r)
        return self.phi(np.asarray(r, dtype=float) / 2.0**l)


def make_cutoff() -> DyadicCutoff:
    return DyadicCutoff()


CUTOFF = make_cutoff()


def plateau_bump(t, inner=0.5, flat_lo=0.75, flat_hi=1.25, outer=1.5):
    """Smooth even bump: 1 on flat_lo <= |t| <= flat_hi, 0 outside (inner, outer)."""
    a = np.abs(np.asarray(t, dtype=float))
    rise = smooth_step((a - inner) / (flat_lo - inner))
    fall = 1.0 - smooth_step((a - flat_hi) / (outer - flat_hi))
    return rise * fall


def max_band(n: int) -> int:
    """Largest band index usable on an n-point axis, log2(n/4)."""
    if n < 4:
        raise ValueError(f"grid too small for any band: n={n}")
    return int(np.log2(n)) - 2


def _check_band(l: int, n: int) -> None:
    if not 0 <= l <= max_band(n):
        raise ValueError(f"band {l} out of range [0, {max_band(n)}] for n={n}")


def project_band(f: GridFn, l: int) -> GridFn:
    """P_l f, with P_0 the low block chi(|xi|)."""
    _check_band(l, f.n)
    r = frequency_radius(f.n, f.dim)
    s = forward_transform(f)
    return inverse_transform(Spectrum(s.coeffs * CUTOFF.band(r, l)))


def low_block(f: GridFn) -> GridFn:
    return project_band(f, 0)


def xi_bands(rows: np.ndarray, n: int, dim: int, bands=None):
    """Yield ``(l, P_l^xi rows)`` for rows of a symbol table.

    Each row is sigma(x_i, .) on the frequency lattice, flattened in FFT
    order.  The lattice is treated as a torus of circumference n and the band
    multiplier acts on the conjugate integer variable.
    """
    m = rows.shape[0]
    shape = (m,) + (n,) * dim
    axes = tuple(range(1, dim + 1))
    g = np.fft.fftn(rows.reshape(shape), axes=axes)
    r = frequency_radius(n, dim)
    if bands is None:
        bands = range(max_band(n) + 1)
    for l in bands:
        _check_band(l, n)
        yield l, np.fft.ifftn(g * CUTOFF.band(r, l), axes=axes).reshape(m, -1)


def project_band_in_xi(sigma, l: int):
    """P_l^xi sigma as a table symbol (materializes the symbol)."""
    from .symbols import TableSymbol

    _check_band(l, sigma.n)
    table = sigma.table()
    (_, proj), = xi_bands(table, sigma.n, sigma.dim, bands=[l])
    return TableSymbol(proj, dim=sigma.dim, scale=sigma.scale, tag=f"P{l}xi({sigma.tag})",
                       params=dict(sigma.params))


def _lq_sum(terms, q: float) -> float:
    terms = np.asarray(terms, dtype=float)
    if np.isinf(q):
        return float(terms.max())
    return float(np.sum(terms**q) ** (1.0 / q))


def besov_quantity(f: GridFn, s: float, p: float, q: float) -> float:
    """(sum_l 2^{l s q} ||P_l f||_p^q)^{1/q} over l = 0..log2(N/4)."""
    if not (p >= 1 and q >= 1):
        raise ValueError(f"need p, q >= 1, got p={p}, q={q}")
    terms = [2.0 ** (l * s) * lp_norm(project_band(f, l), p) for l in range(max_band(f.n) + 1)]
    return _lq_sum(terms, q)


def bernstein_ratio(f: GridFn, l: int, p: float, q: float) -> float:
    """||P_l f||_q / (2^{l n (1/p - 1/q)} ||P_l f||_p); 0 when P_l f vanishes."""
    if not (1 <= p < q):
        raise ValueError(f"need 1 <= p < q, got p={p}, q={q}")
    g = project_band(f, l)
    den = lp_norm(g, p)
    if den <= 1e-13 * max(lp_norm(f, p), 1e-300):
        return 0.0
    inv_q = 0.0 if np.isinf(q) else 1.0 / q
    return lp_norm(g, q) / (2.0 ** (l * f.dim * (1.0 / p - inv_q)) * den)
