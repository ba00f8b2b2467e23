"""Named experiments, one per acceptance criterion plus the radial measurement.

Each experiment takes a merged parameter dict and a seeded generator and
returns an ``Outcome``: measured values, pass/fail checks, tables for CSV
output, and candidate regression constants.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import baselines
from . import bounds as bd
from . import gallery as gal
from . import kernels as ker
from . import maximal as mx
from . import pdo
from . import sphere as sph
from .grid import GridFn, Spectrum, forward_transform, frequencies, frequency_radius, inner, inverse_transform, lp_norm
from .lp_decomp import CUTOFF, bernstein_ratio, low_block, max_band, project_band
from .symbols import DirectionField, TableSymbol, constant_symbol, multiplier_symbol, rescale

#: Allowed growth of a "must not exceed" regression constant.
CEILING_SLACK = 1.05
#: Allowed drift of a "stable" regression constant.
STABLE_SLACK = 0.05


@dataclass
class Outcome:
    results: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    tables: dict = field(default_factory=dict)
    candidates: dict = field(default_factory=dict)

    def check(self, name: str, value, threshold, passed: bool, note: str = "") -> bool:
        entry = {"name": name, "value": _plain(value), "threshold": _plain(threshold), "passed": bool(passed)}
        if note:
            entry["note"] = note
        self.checks.append(entry)
        return bool(passed)

    def ceiling(self, key: str, value: float, known: dict) -> None:
        """value <= 1.05 * baseline; records the candidate either way."""
        self.candidates[key] = float(value)
        if key not in known:
            self.check(f"baseline {key}", value, None, True, note="no baseline recorded; value is the candidate")
            return
        limit = CEILING_SLACK * known[key]
        self.check(f"baseline {key}", value, limit, value <= limit)

    def stable(self, key: str, value: float, known: dict) -> None:
        """|value / baseline - 1| <= 5%."""
        self.candidates[key] = float(value)
        if key not in known:
            self.check(f"baseline {key}", value, None, True, note="no baseline recorded; value is the candidate")
            return
        drift = abs(value / known[key] - 1.0)
        self.check(f"baseline {key} drift", drift, STABLE_SLACK, drift <= STABLE_SLACK)

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.checks)


def _plain(v):
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    return v


def _unit(rng, shape) -> GridFn:
    v = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    g = GridFn(v)
    return g * (1.0 / lp_norm(g, 2))


def _band_limited(rng, n: int, dim: int, decay: float = 0.5) -> GridFn:
    """Random f with spectrum in |xi| <= N/4 and mild |xi|^{-decay} falloff."""
    shape = (n,) * dim
    c = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    r = frequency_radius(n, dim)
    c[r > n / 4] = 0
    c /= (1.0 + r) ** decay
    return inverse_transform(Spectrum(c))


# ---------------------------------------------------------------------------
# 1


def identity_adjoint(p: dict, rng) -> Outcome:
    out = Outcome()
    n = p["n"]
    one = constant_symbol(n)
    ident = 0.0
    for _ in range(5):
        f = _unit(rng, (n,))
        for path in ("auto", "generic"):
            ident = max(ident, float(np.abs(pdo.apply(one, f, path=path).values - f.values).max()))
    out.check("identity sup error", ident, 1e-10, ident <= 1e-10)
    symbols = {"random_table": TableSymbol(gal.random_symbol(n, rng).table(), tag="random_table"),
               "random_separable": gal.random_symbol(n, rng)}
    for name, sigma in symbols.items():
        worst = 0.0
        for _ in range(p["pairs"]):
            f, g = _unit(rng, (n,)), _unit(rng, (n,))
            worst = max(worst, abs(inner(pdo.apply(sigma, f), g) - inner(f, pdo.apply_adjoint(sigma, g))))
        out.results[f"adjoint_defect_{name}"] = worst
        out.check(f"adjoint defect {name}", worst, 1e-10, worst <= 1e-10)
    out.results["identity_error"] = ident
    return out


# ---------------------------------------------------------------------------
# 2


def counterexample_growth(p: dict, rng) -> Outcome:
    out = Outcome()
    n, delta, pexp = p["n"], p["delta"], p["p"]
    f0 = gal.counterexample_f0(n, p["f0_radius"])
    thr = gal.sobolev_threshold(delta)
    out.check("p above threshold", pexp, thr, pexp > thr)
    w = gal.window_sobolev_constant(pexp)
    f0s = gal.SparseSpectrum.from_grid(f0, tol=1e-14 * np.abs(forward_transform(f0).coeffs).max())
    rows = []
    for nt in p["sweep"]:
        fs = gal.counterexample_testfn_sparse(delta, nt, f0)
        tf = gal.apply_counterexample_sparse(delta, nt, fs)
        ratio = tf.norm() / f0s.norm()
        oracle = gal.harmonic_partial_sum(nt)
        fn_ratio = fs.norm() / f0s.norm()
        fn_oracle = math.sqrt(sum(j ** (-(1 + 2 * delta)) for j in range(gal.J_MIN, nt + 1)))
        rows.append({"n_terms": nt, "ratio": ratio, "harmonic_sum": oracle,
                     "rel_err": abs(ratio - oracle) / oracle, "fN_norm_rel_err": abs(fn_ratio - fn_oracle) / fn_oracle,
                     "shape_err": tf.scaled_distance(f0s, oracle) / (oracle * f0s.norm()),
                     "sobolev_quantity": gal.counterexample_sobolev_quantity(delta, nt, pexp, w)})
    out.tables["growth"] = rows
    for r in rows:
        out.check(f"ratio vs harmonic sum N={r['n_terms']}", r["rel_err"], 0.005, r["rel_err"] <= 0.005)
        out.check(f"T f_N shape N={r['n_terms']}", r["shape_err"], 1e-6, r["shape_err"] <= 1e-6)
        out.check(f"f_N norm N={r['n_terms']}", r["fN_norm_rel_err"], 1e-6, r["fN_norm_rel_err"] <= 1e-6)
    q = [r["sobolev_quantity"] for r in rows]
    out.check("sobolev quantity spread", max(q) / min(q), 2.0, max(q) / min(q) <= 2.0)
    # the grid path, where the lattice is large enough
    j_top = int(np.log2(n)) - 3
    sigma = gal.counterexample_symbol(delta, j_top, n)
    dense_rows = []
    for nt in range(gal.J_MIN, j_top + 1):
        tf = pdo.apply(sigma, gal.counterexample_testfn(delta, nt, f0))
        sp = gal.apply_counterexample_sparse(delta, j_top, gal.counterexample_testfn_sparse(delta, nt, f0))
        err = float(np.abs(forward_transform(tf).coeffs - sp.to_grid(n).coeffs).max())
        rel = abs(lp_norm(tf, 2) / lp_norm(f0, 2) - gal.harmonic_partial_sum(nt)) / gal.harmonic_partial_sum(nt)
        dense_rows.append({"n_terms": nt, "grid_vs_sparse": err, "grid_rel_err": rel})
        out.check(f"grid path N={nt}", rel, 1e-6, rel <= 1e-6)
        out.check(f"grid vs sparse N={nt}", err, 1e-10, err <= 1e-10)
    out.tables["grid_check"] = dense_rows
    out.results.update({"p": pexp, "threshold": thr, "window_constant": w,
                        "sobolev_spread": max(q) / min(q)})
    return out


# ---------------------------------------------------------------------------
# 3


def suite_1d(n: int, count: int, rng) -> dict:
    suite = {f"random_{k:02d}": gal.random_symbol(n, rng) for k in range(count)}
    suite.update(gal.gallery_1d(n, rng))
    return suite


def theorem1_bound_sweep(p: dict, rng) -> Outcome:
    out = Outcome()
    known = baselines.load()
    rows = []
    for name, sigma in suite_1d(p["n"], p["count"], rng).items():
        norm = pdo.operator_norm(sigma, p["norm_method"])
        b2 = bd.theorem1_quantity(sigma)
        rows.append({"symbol": name, "norm": norm.value, "converged": norm.converged, "B2": b2,
                     "ratio": norm.value / b2})
    out.tables["sweep"] = rows
    finite = all(math.isfinite(r["norm"]) and r["converged"] for r in rows)
    out.check("all norms finite and converged", finite, True, finite)
    c_star = max(r["ratio"] for r in rows)
    out.results.update({"C_star": c_star, "count": len(rows)})
    out.ceiling("theorem1.C_star", c_star, known)
    return out


# ---------------------------------------------------------------------------
# 4


def scale_invariance(p: dict, rng) -> Outcome:
    out = Outcome()
    rows = []
    suite = gal.gallery_1d(p["n"], rng)
    suite["random"] = gal.random_symbol(p["n"], rng)
    n2 = p["n_2d"]
    k0 = int(np.log2(n2)) - 4
    suite["thin_circle_2d"] = gal.thin_circle_symbol(1, DirectionField.random_angles(n2 * n2, rng), k0, n2)
    worst = {"B2": 0.0, "B1": 0.0, "Bq": 0.0, "norm": 0.0}
    for name, sigma in suite.items():
        base = {"B2": bd.theorem1_quantity(sigma), "B1": bd.weak11_quantity(sigma),
                "Bq": bd.lq_quantity(sigma, 1.5)}
        method = "dense" if sigma.size <= pdo.DENSE_LIMIT else "power"
        base["norm"] = pdo.operator_norm(sigma, method).value
        for j in (-1, 1):
            s2 = rescale(sigma, j)
            vals = {"B2": bd.theorem1_quantity(s2), "B1": bd.weak11_quantity(s2), "Bq": bd.lq_quantity(s2, 1.5),
                    "norm": pdo.operator_norm(s2, method).value}
            row = {"symbol": name, "j": j}
            for key in worst:
                drift = abs(vals[key] - base[key]) / base[key]
                row[key] = drift
                worst[key] = max(worst[key], drift)
            rows.append(row)
    out.tables["drift"] = rows
    for key, v in worst.items():
        out.check(f"rescale drift {key}", v, 1e-6, v <= 1e-6)
    out.results.update({f"max_drift_{k}": v for k, v in worst.items()})
    # physical relocation of the annulus center, reported only
    k_lo = int(np.log2(p["n"])) - 5
    u_lo = DirectionField.random_dilation(p["n"], 2.0**k_lo, rng, 0.26, 3.9)
    s_lo = gal.carleson_thin_symbol(2, u_lo, k_lo, p["n"])
    s_hi = gal.carleson_thin_symbol(2, DirectionField(u_lo.values * 2, "dilation"), k_lo + 1, p["n"])
    out.results["center_shift_B2_ratio"] = bd.theorem1_quantity(s_hi) / bd.theorem1_quantity(s_lo)
    return out


# ---------------------------------------------------------------------------
# 5


def carleson_domination(p: dict, rng) -> Outcome:
    out = Outcome()
    known = baselines.load()
    n = p["n"]
    fs = [_band_limited(rng, n, 1) for _ in range(p["functions"])]
    rows = []
    for m in p["m_values"]:
        u = mx.carleson_u_grid(m, n)
        doms = [mx.carleson_domination(m, f, u) for f in fs]
        rows.append({"m": m, "measured_C": max(d.constant for d in doms), "u_grid_size": int(u.size),
                     "flagged": sum(d.flagged for d in doms)})
    out.tables["constants"] = rows
    cs = [r["measured_C"] for r in rows]
    ok = all(math.isfinite(c) for c in cs) and all(r["flagged"] == 0 for r in rows)
    out.check("domination constants finite", ok, True, ok)
    out.check("domination uniform in m", max(cs) / min(cs), 3.0, max(cs) / min(cs) <= 3.0)
    out.ceiling("carleson.C_max", max(cs), known)
    ne, k0 = p["sum_n"], p["sum_k0"]
    sums = []
    for m in p["m_values"]:
        u = DirectionField.random_dilation(ne, 2.0**k0, rng, 0.26, 3.9, distinct=p["sum_distinct"])
        total, band_rows = bd.weak11_quantity(gal.carleson_thin_symbol(m, u, k0, ne), bands=True)
        sums.append({"m": m, "B1": total})
        out.tables[f"sum_bands_m{m}"] = band_rows
    out.tables["sum"] = sums
    b = [s["B1"] for s in sums]
    out.check("B1 sum uniform in m", max(b) / min(b), 3.0, max(b) / min(b) <= 3.0)
    out.results.update({"C_ratio": max(cs) / min(cs), "sum_ratio": max(b) / min(b)})
    return out


# ---------------------------------------------------------------------------
# 6


def thin_circle_norms(p: dict, rng) -> Outcome:
    out = Outcome()
    n, k0 = p["n"], p["k0"]
    ann = gal.annulus(n, k0).reshape(n, n)
    fs = []
    for _ in range(p["functions"]):
        c = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) * ann
        fs.append(inverse_transform(Spectrum(c)))
    rows = []
    for m in p["m_values"]:
        ang = mx.circle_angle_grid(m)
        per_u = max(float(np.abs(mx.thin_circle_multiplier(m, a, n, k0)).max()) for a in ang)
        ray = max(lp_norm(mx.thin_circle_max(m, f, ang, k0), 2) / lp_norm(f, 2) for f in fs)
        # the per-u multiplier norm, also through the operator-norm path
        probe = pdo.operator_norm(multiplier_symbol(mx.thin_circle_multiplier(m, ang[0], n, k0), dim=2),
                                  "power")
        rows.append({"m": m, "angles": int(ang.size), "per_u_norm": per_u, "rayleigh": ray,
                     "power_probe": probe.value, "probe_converged": probe.converged})
    out.tables["norms"] = rows
    r = [row["rayleigh"] for row in rows]
    u = [row["per_u_norm"] for row in rows]
    out.check("maximal Rayleigh uniform in m", max(r) / min(r), 3.0, max(r) / min(r) <= 3.0)
    out.check("per-u norms uniform in m", max(u) / min(u), 3.0, max(u) / min(u) <= 3.0)
    conv = all(row["probe_converged"] for row in rows)
    out.check("power probes converged", conv, True, conv)
    out.results.update({"rayleigh_ratio": max(r) / min(r), "per_u_ratio": max(u) / min(u)})
    return out


# ---------------------------------------------------------------------------
# 7


def directional_sharpness(p: dict, rng) -> Outcome:
    out = Outcome()
    nx, m = p["n_x"], p["angles"]
    field_ = DirectionField.random_angles(nx * nx, rng)
    rows = []
    for k in p["log2_inv_delta"]:
        delta = 2.0**-k
        q = sph.directional_sphere_symbol(delta, field_, nx, m)
        rows.append({"log2_inv_delta": k, "homogeneous": bd.homogeneous_quantity(q, 2.0),
                     "w11_sup": float(sph.w11_norm(q.values).max()), "sup_abs": float(np.abs(q.values).max())})
    for a, b in zip(rows, rows[1:]):
        b["increment"] = b["homogeneous"] - a["homogeneous"]
    out.tables["sharpness"] = rows
    inc = [r["increment"] for r in rows[1:]]
    out.check("strictly increasing", min(inc), 0.0, min(inc) > 0)
    good = sum(i >= 0.3 for i in inc)
    out.check("increments >= 0.3 per halving", good, len(inc) - 1, good >= len(inc) - 1)
    w = [r["w11_sup"] for r in rows]
    out.check("W11 spread", max(w) / min(w), 2.0, max(w) / min(w) <= 2.0)
    sup = max(r["sup_abs"] for r in rows)
    lat = gal.directional_symbol(2.0 ** -max(p["log2_inv_delta"]), DirectionField.random_angles(32 * 32, rng), 1, 32)
    sup = max(sup, float(np.abs(lat.table()).max()))
    out.check("sup |sigma_delta| <= 1", sup, 1.0, sup <= 1.0)
    out.results.update({"increments": inc, "w11_ratio": max(w) / min(w), "sup_abs": sup})
    return out


# ---------------------------------------------------------------------------
# 8


def cap_kernel_certificates(p: dict, rng) -> Outcome:
    out = Outcome()
    known = baselines.load()
    n, k0 = p["n"], p["k0"]
    thetas = np.arange(p["angles"]) * 2 * np.pi / p["angles"]
    rec = ker.l1_uniformity(p["l_values"], thetas, k0, n)
    out.tables["l1"] = [{"key": k, "l1": v} for k, v in rec.table.items()]
    out.check("L1 max/min", rec.ratio, 4.0, rec.ratio <= 4.0)
    out.ceiling("kernels.l1_max", rec.max, known)
    certs = []
    for th in p["certificate_angles"]:
        for l in [0, *p["l_values"]]:
            c = ker.decay_certificate(ker.cap_kernel(l, th, k0, n), p["n_exp"])
            certs.append({"l": l, "theta": th, "along_exponent": c.along_exponent,
                          "across_exponent": c.across_exponent, "along_onset": c.along_onset,
                          "across_onset": c.across_onset, "passed": c.passed, "flags": "; ".join(c.flags)})
    out.tables["certificates"] = certs
    allpass = all(c["passed"] for c in certs)
    out.check("decay certificates pass", allpass, True, allpass)
    first = [c for c in certs if c["theta"] == p["certificate_angles"][0] and c["l"] >= 1]
    slope = float(np.polyfit([c["l"] for c in first], np.log2([c["across_onset"] for c in first]), 1)[0])
    out.check("transverse onset slope", slope, [0.7, 1.3], 0.7 <= slope <= 1.3)
    ann = gal.annulus(n, k0).reshape(n, n)
    cone = []
    for l in p["cone_l"]:
        g = inverse_transform(Spectrum((rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) * ann))
        ratio = ker.cone_lp_sum_check(l, g, 2.0, k0)
        cone.append({"l": l, "ratio": ratio, "overlap": ker.cone_overlap(ker.cone_partition(l, n))})
    out.tables["cone"] = cone
    worst = max(c["ratio"] for c in cone)
    out.check("cone q=2 ratio", worst, 3.0, worst <= 3.0)
    out.results.update({"l1_max": rec.max, "l1_ratio": rec.ratio, "onset_slope": slope, "cone_ratio": worst})
    return out


# ---------------------------------------------------------------------------
# 9


def algebra_check(p: dict, rng) -> Outcome:
    out = Outcome()
    known = baselines.load()
    n = p["n"]
    rows = []
    for k in range(p["pairs"]):
        rec = bd.algebra_check(gal.random_symbol(n, rng), gal.random_symbol(n, rng))
        rows.append({"pair": k, "lhs": rec.lhs, "rhs": rec.rhs, "ratio": rec.ratio})
    out.tables["pairs"] = rows
    c = max(r["ratio"] for r in rows)
    out.stable("algebra.C", c, known)
    exp_rows = []
    for k in range(p["exp_symbols"]):
        sigma = gal.random_symbol(n, rng)
        rec = bd.exp_check(sigma)
        exp_rows.append({"symbol": k, "B2_exp": rec.lhs, "B2": bd.theorem1_quantity(sigma), "c": rec.ratio})
    out.tables["exp"] = exp_rows
    cexp = max(r["c"] for r in exp_rows)
    out.stable("algebra.exp_c", cexp, known)
    ok = all(r["B2_exp"] <= n ** 0.5 * math.exp(cexp * r["B2"]) * (1 + 1e-12) for r in exp_rows)
    out.check("exp bound with recorded c", ok, True, ok)
    out.results.update({"C": c, "C_scaled": c * math.sqrt(n), "exp_c": cexp})
    return out


# ---------------------------------------------------------------------------
# 10


def infrastructure(p: dict, rng) -> Outcome:
    out = Outcome()
    known = baselines.load()
    worst_rt = worst_pl = 0.0
    for n in p["sizes"]:
        f = GridFn(rng.standard_normal(n) + 1j * rng.standard_normal(n))
        s = forward_transform(f)
        worst_rt = max(worst_rt, float(np.abs(inverse_transform(s).values - f.values).max() / np.abs(f.values).max()))
        worst_pl = max(worst_pl, abs(np.sum(np.abs(s.coeffs) ** 2) - lp_norm(f, 2) ** 2) / lp_norm(f, 2) ** 2)
    out.check("roundtrip", worst_rt, 1e-12, worst_rt <= 1e-12)
    out.check("Plancherel", worst_pl, 1e-12, worst_pl <= 1e-12)
    recon = 0.0
    for dim, n in ((1, 1024), (2, 64)):
        f = _band_limited(rng, n, dim, 0.0)
        total = low_block(f).values + sum(project_band(f, l).values for l in range(1, max_band(n) + 1))
        recon = max(recon, float(np.abs(total - f.values).max() / np.abs(f.values).max()))
    out.check("LP reconstruction", recon, 1e-10, recon <= 1e-10)
    n = 4096
    r = np.abs(frequencies(n)).astype(float)
    live = (r > 0) & (r <= n / 4)
    pou = CUTOFF.chi(r) + sum(CUTOFF.phi(r / 2.0**l) for l in range(1, max_band(n) + 1))
    t = np.abs(rng.standard_normal(2000)) * 10.0 ** rng.uniform(-3, 3, 2000)
    telescope = sum(CUTOFF.phi(2.0**-k * t) for k in range(-40, 41))
    pou_err = max(float(np.abs(pou[live] - 1).max()), float(np.abs(telescope - 1).max()))
    out.check("partition of unity", pou_err, 1e-10, pou_err <= 1e-10)
    bern = bernstein_constants(rng, p["bernstein_n"], p["bernstein_trials"])
    out.tables["bernstein"] = [{"p": k.split(",")[0], "q": k.split(",")[1], "max_ratio": v} for k, v in bern.items()]
    for key, v in bern.items():
        out.ceiling(f"bernstein.{key}", v, known)
    out.results.update({"roundtrip": worst_rt, "plancherel": worst_pl, "reconstruction": recon,
                        "partition_of_unity": pou_err, "bernstein": bern})
    return out


def bernstein_constants(rng, n: int, trials: int) -> dict:
    """Largest Bernstein ratio over random band-l functions, per (p, q)."""
    out = {}
    pairs = [(1.0, 2.0), (2.0, np.inf), (1.0, np.inf)]
    for pq in pairs:
        worst = 0.0
        for _ in range(trials):
            l = int(rng.integers(1, max_band(n) + 1))
            f = _band_limited(rng, n, 1, 0.0)
            worst = max(worst, bernstein_ratio(f, l, *pq))
        out[f"{pq[0]:g},{pq[1]:g}"] = worst
    return out


# ---------------------------------------------------------------------------
# radial


def radial_profile(m: int, radii: int, r0: float) -> np.ndarray:
    r = np.arange(radii, dtype=float)
    return CUTOFF.phi(2.0**m * (1.0 - r**2 / r0**2))


def radial_quantity(p: dict, rng) -> Outcome:
    out = Outcome()
    rows = []
    for m in p["m_values"]:
        total, bands = bd.radial_quantity(radial_profile(m, p["radii"], p["r0"])[None, :], bands=True)
        rows.append({"m": m, "radial": total})
        out.tables[f"bands_m{m}"] = bands
    out.tables["radial"] = rows
    vals = [r["radial"] for r in rows]
    ok = all(math.isfinite(v) and v > 0 for v in vals)
    out.check("radial quantities finite", ok, True, ok)
    slope = float(np.polyfit(p["m_values"], np.log2(vals), 1)[0])
    out.results.update({"log2_slope_in_m": slope, "values": vals})
    return out


# ---------------------------------------------------------------------------
# registry


@dataclass(frozen=True)
class Experiment:
    name: str
    func: object
    defaults: dict
    criterion: str


REGISTRY = {e.name: e for e in [
    Experiment("identity-adjoint", identity_adjoint, {"n": 256, "pairs": 100},
               "identity and adjoint identity to 1e-10"),
    Experiment("counterexample-growth", counterexample_growth,
               {"n": 2**14, "delta": 0.1, "p": 3.0, "f0_radius": 16, "sweep": [16, 32, 64, 100]},
               "lacunary counterexample: exact harmonic growth, bounded Sobolev size"),
    Experiment("theorem1-bound-sweep", theorem1_bound_sweep, {"n": 128, "count": 50, "norm_method": "dense"},
               "operator norm over B2 below a recorded constant"),
    Experiment("scale-invariance", scale_invariance, {"n": 128, "n_2d": 32},
               "dyadic rescaling leaves bounds and norms unchanged"),
    Experiment("carleson-domination", carleson_domination,
               {"n": 4096, "m_values": [2, 3, 4, 5, 6, 7], "functions": 20, "sum_n": 2**14, "sum_k0": 9,
                "sum_distinct": 256},
               "thin-interval maximal operator dominated uniformly in m"),
    Experiment("thin-circle-norms", thin_circle_norms, {"n": 128, "k0": 3, "m_values": [1, 2, 3, 4, 5],
                                                        "functions": 10},
               "thin-cap maximal operator bounded uniformly in m"),
    Experiment("directional-sharpness", directional_sharpness,
               {"n_x": 32, "angles": 2048, "log2_inv_delta": [1, 2, 3, 4, 5, 6]},
               "homogeneous quantity grows while W11 stays bounded"),
    Experiment("cap-kernel-certificates", cap_kernel_certificates,
               {"n": 256, "k0": 4, "l_values": [1, 2, 3, 4, 5], "angles": 8, "certificate_angles": [0.0],
                "n_exp": 2.0, "cone_l": [1, 2, 3]},
               "uniform kernel L1 bounds, anisotropic decay, cone sums"),
    Experiment("algebra-check", algebra_check, {"n": 128, "pairs": 50, "exp_symbols": 20},
               "B2 is submultiplicative up to a recorded constant"),
    Experiment("infrastructure", infrastructure,
               {"sizes": [64, 128, 256, 512, 1024, 2048, 4096], "bernstein_n": 1024, "bernstein_trials": 100},
               "transforms, projections, cutoffs and Bernstein constants"),
    Experiment("radial-quantity", radial_quantity, {"m_values": [2, 3, 4, 5, 6], "radii": 2048, "r0": 256.0},
               "radial Besov-type quantity of thin annuli"),
]}


def validate_params(name: str, p: dict) -> list:
    """Guard violations for an experiment's merged parameters, as messages."""
    errs = []
    if name not in REGISTRY:
        return [f"unknown experiment {name!r}"]

    def pow2(key):
        v = p.get(key)
        if not (isinstance(v, int) and v >= 1 and v & (v - 1) == 0):
            errs.append(f"{key} must be a power of two, got {v!r}")
            return False
        return True

    if name == "counterexample-growth":
        if pow2("n"):
            if p["n"] < 2**11:
                errs.append("counterexample needs n >= 2^11")
        if not 0 < p["delta"] < 0.5:
            errs.append("delta must lie in (0, 1/2)")
        elif p["p"] <= gal.sobolev_threshold(p["delta"]):
            errs.append(f"p must exceed {gal.sobolev_threshold(p['delta']):.4f}")
        if min(p["sweep"]) < gal.J_MIN:
            errs.append(f"sweep entries must be >= {gal.J_MIN}")
    elif name == "carleson-domination":
        pow2("n") and pow2("sum_n")
        if min(p["m_values"]) < 1:
            errs.append("m must be >= 1")
        elif p.get("n") and 2 ** max(p["m_values"]) > p["n"] // 16:
            errs.append(f"m={max(p['m_values'])} too large for n={p['n']}")
        if p.get("sum_n") and not 2 <= 2 ** p["sum_k0"] <= p["sum_n"] // 16:
            errs.append("sum_k0 violates 2^k0 <= N/16")
    elif name in ("thin-circle-norms", "cap-kernel-certificates"):
        if pow2("n") and not 2 <= 2 ** p["k0"] <= p["n"] // 16:
            errs.append(f"k0={p['k0']} violates 2^k0 <= N/16")
        if name == "cap-kernel-certificates" and max(p["l_values"]) > p["k0"] + 1:
            errs.append(f"cap scale l={max(p['l_values'])} unresolvable for k0={p['k0']}")
        if name == "thin-circle-norms" and max(p["m_values"]) > int(np.log2(p["n"])):
            errs.append(f"m={max(p['m_values'])} too large for n={p['n']}")
    elif name == "directional-sharpness":
        pow2("n_x") and pow2("angles")
    elif name in ("identity-adjoint", "theorem1-bound-sweep", "scale-invariance", "algebra-check"):
        if pow2("n") and p["n"] < 16:
            errs.append("n must be >= 16")
        if name == "theorem1-bound-sweep" and p["norm_method"] not in ("dense", "power"):
            errs.append(f"unknown norm method {p['norm_method']!r}")
        if name == "theorem1-bound-sweep" and p["norm_method"] == "dense" and p["n"] > pdo.DENSE_LIMIT:
            errs.append("dense norms need n <= 4096")
    elif name == "radial-quantity":
        pow2("radii")
    return errs


def run_experiment(name: str, params: dict, seed: int) -> tuple:
    """Run by name; returns (merged params, Outcome, seconds)."""
    exp = REGISTRY[name]
    merged = {**exp.defaults, **(params or {})}
    errs = validate_params(name, merged)
    if errs:
        raise ValueError("; ".join(errs))
    rng = np.random.default_rng(seed)
    t0 = time.perf_counter()
    outcome = exp.func(merged, rng)
    return merged, outcome, time.perf_counter() - t0


def to_jsonable(obj):
    return json.loads(json.dumps(obj, default=_plain))
