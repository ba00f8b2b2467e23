"""Symbol tables sigma(x_i, xi) and their storage.

A symbol pairs every grid point x_i with a function on the frequency lattice.
Rows are produced on demand so that large 2D symbols never have to be held as
one N^{2n} table:

``TableSymbol``
    an explicit (N^n, N^n) array.
``SeparableSymbol``
    a finite sum of products a_r(x) b_r(xi).
``FieldSymbol``
    a lattice profile selected per grid point by an arbitrary field value,
    sigma(x_i, .) = profile(field[i]).  Rough direction fields live here.

All rows are flattened in FFT order of the lattice.  ``scale`` records a
dyadic change of units: a symbol with scale j lives on a torus of period
2^{-j} with frequency spacing 2^j.  The table itself is unchanged by a
change of units.
"""

from __future__ import annotations

import copy
import hashlib
import json
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .grid import frequencies, is_power_of_two

#: Rows materialized at once when streaming a symbol.
CHUNK_ENTRIES = 1 << 21
#: Largest table ``table()`` will build without ``force``.
MAX_TABLE_ENTRIES = 1 << 26


class Symbol:
    """Base class; subclasses implement ``_rows``."""

    def __init__(self, n: int, dim: int, scale: int = 0, tag: str = "", params=None):
        if dim not in (1, 2):
            raise ValueError(f"dim must be 1 or 2, got {dim}")
        if not is_power_of_two(n):
            raise ValueError(f"n must be a power of two, got {n}")
        self.n = int(n)
        self.dim = int(dim)
        self.scale = int(scale)
        self.tag = tag
        self.params = dict(params or {})

    @property
    def size(self) -> int:
        return self.n**self.dim

    @property
    def x_independent(self) -> bool:
        return False

    def rows(self, start: int = 0, stop: int | None = None) -> np.ndarray:
        stop = self.size if stop is None else stop
        return np.asarray(self._rows(start, stop), dtype=np.complex128)

    def _rows(self, start, stop):
        raise NotImplementedError

    def chunk_rows(self) -> int:
        return max(1, CHUNK_ENTRIES // self.size)

    def iter_rows(self, chunk: int | None = None):
        """Yield ``(start, rows)`` blocks covering every grid point."""
        chunk = chunk or self.chunk_rows()
        for start in range(0, self.size, chunk):
            stop = min(start + chunk, self.size)
            yield start, self.rows(start, stop)

    def table(self, force: bool = False) -> np.ndarray:
        if not force and self.size**2 > MAX_TABLE_ENTRIES:
            raise MemoryError(f"table of {self.size}^2 entries exceeds guard; pass force=True")
        return self.rows(0, self.size)

    def row_at(self, i: int) -> np.ndarray:
        return self.rows(i, i + 1)[0]

    def with_scale(self, scale: int) -> "Symbol":
        out = copy.copy(self)
        out.params = dict(self.params)
        out.scale = int(scale)
        return out

    def __repr__(self):
        return f"{type(self).__name__}(tag={self.tag!r}, n={self.n}, dim={self.dim}, scale={self.scale})"


class TableSymbol(Symbol):
    def __init__(self, values, dim: int = 1, scale: int = 0, tag: str = "table", params=None):
        values = np.asarray(values, dtype=np.complex128)
        n = int(round(values.shape[0] ** (1.0 / dim)))
        super().__init__(n, dim, scale, tag, params)
        if values.shape != (self.size, self.size):
            raise ValueError(f"table must be {(self.size, self.size)}, got {values.shape}")
        self.values = values

    @property
    def x_independent(self) -> bool:
        return bool(np.all(self.values == self.values[:1]))

    def _rows(self, start, stop):
        return self.values[start:stop]


class SeparableSymbol(Symbol):
    """sigma(x, xi) = sum_r x_factors[r, x] * xi_factors[r, xi]."""

    def __init__(self, x_factors, xi_factors, dim: int = 1, scale: int = 0, tag: str = "separable",
                 params=None):
        a = np.atleast_2d(np.asarray(x_factors, dtype=np.complex128))
        b = np.atleast_2d(np.asarray(xi_factors, dtype=np.complex128))
        if a.shape != b.shape:
            raise ValueError(f"factor shapes differ: {a.shape} vs {b.shape}")
        n = int(round(a.shape[1] ** (1.0 / dim)))
        super().__init__(n, dim, scale, tag, params)
        if a.shape[1] != self.size:
            raise ValueError("factor length is not n**dim")
        self.x_factors = a
        self.xi_factors = b

    @property
    def rank(self) -> int:
        return self.x_factors.shape[0]

    @property
    def x_independent(self) -> bool:
        a = self.x_factors
        return bool(np.all(a == a[:, :1]))

    def _rows(self, start, stop):
        return self.x_factors[:, start:stop].T @ self.xi_factors


class FieldSymbol(Symbol):
    """sigma(x_i, .) = profile(field[i]) for an arbitrary per-point field.

    ``profile`` maps an array of m field values to an (m, n**dim) array of
    lattice rows.
    """

    def __init__(self, field, profile, n: int, dim: int, scale: int = 0, tag: str = "field",
                 params=None):
        super().__init__(n, dim, scale, tag, params)
        field = np.asarray(field).reshape(-1)
        if field.shape[0] != self.size:
            raise ValueError(f"field needs {self.size} entries, got {field.shape[0]}")
        self.field = field
        self.profile = profile

    @property
    def x_independent(self) -> bool:
        return bool(np.all(self.field == self.field[0]))

    def _rows(self, start, stop):
        return self.profile(self.field[start:stop])

    def groups(self):
        """Yield ``(row, mask)`` per distinct field value."""
        values, inverse = np.unique(self.field, return_inverse=True)
        rows = self.profile(values)
        for k in range(values.shape[0]):
            yield rows[k], inverse == k


@dataclass(frozen=True)
class DirectionField:
    """Per-grid-point parameter u(x).

    ``kind == "dilation"``: positive dilation values (1D Carleson family).
    ``kind == "angle"``: unit vectors stored as angles in [0, 2 pi) (2D).
    """

    values: np.ndarray
    kind: str

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float).reshape(-1)
        object.__setattr__(self, "values", v)
        if self.kind == "dilation":
            if np.any(v <= 0):
                raise ValueError("dilation field must be positive")
        elif self.kind == "angle":
            if np.any((v < 0) | (v >= 2 * np.pi)):
                raise ValueError("angles must lie in [0, 2 pi)")
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    @classmethod
    def constant(cls, value: float, size: int, kind: str) -> "DirectionField":
        return cls(np.full(size, float(value)), kind)

    @classmethod
    def random_dilation(cls, size: int, center: float, rng, low=0.25, high=4.0,
                        distinct: int | None = None) -> "DirectionField":
        """Log-uniform values in (low, high) * center, independent per point.

        With ``distinct`` the points draw from that many log-uniform values.
        """
        logs = rng.uniform(np.log(low), np.log(high), size=distinct or size)
        if distinct:
            logs = logs[rng.integers(0, distinct, size=size)]
        return cls(center * np.exp(logs), "dilation")

    @classmethod
    def random_angles(cls, size: int, rng, grid: int | None = None) -> "DirectionField":
        """Independent uniform angles, optionally quantized to ``grid`` directions."""
        if grid is None:
            return cls(rng.uniform(0.0, 2 * np.pi, size=size), "angle")
        return cls(2 * np.pi * rng.integers(0, grid, size=size) / grid, "angle")


def lattice(n: int, dim: int):
    """Lattice frequencies as float arrays flattened in FFT order: (xi,) or (xi1, xi2)."""
    if dim == 1:
        return (frequencies(n).astype(float),)
    k1, k2 = frequencies(n, 2)
    return k1.reshape(-1).astype(float), k2.reshape(-1).astype(float)


def grid_points(n: int, dim: int):
    """Grid coordinates flattened row-major: (x,) or (x1, x2)."""
    x = np.arange(n) / n
    if dim == 1:
        return (x,)
    x1, x2 = np.meshgrid(x, x, indexing="ij")
    return x1.reshape(-1), x2.reshape(-1)


def from_function(gen, dim: int, n: int, tag: str = "function", params=None) -> TableSymbol:
    """Tabulate ``gen(x..., xi...)`` with x as column and xi as row vectors."""
    xs = [x[:, None] for x in grid_points(n, dim)]
    ks = [k[None, :] for k in lattice(n, dim)]
    values = np.asarray(gen(*xs, *ks), dtype=np.complex128)
    values = np.broadcast_to(values, (n**dim, n**dim)).copy()
    return TableSymbol(values, dim=dim, tag=tag, params=params)


def multiplier_symbol(values, dim: int = 1, tag: str = "multiplier", params=None) -> SeparableSymbol:
    """x-independent symbol from lattice values (any shape with n**dim entries)."""
    b = np.asarray(values, dtype=np.complex128).reshape(1, -1)
    return SeparableSymbol(np.ones_like(b), b, dim=dim, tag=tag, params=params)


def constant_symbol(n: int, dim: int = 1, c: complex = 1.0) -> SeparableSymbol:
    return multiplier_symbol(np.full(n**dim, c), dim=dim, tag="constant", params={"c": str(c)})


def rescale(sigma: Symbol, j: int) -> Symbol:
    """sigma(2^j x, 2^{-j} xi) as a relabeling of units; the table is untouched."""
    out = sigma.with_scale(sigma.scale + int(j))
    out.tag = sigma.tag
    return out


def _check_compatible(s1: Symbol, s2: Symbol) -> None:
    if (s1.n, s1.dim, s1.scale) != (s2.n, s2.dim, s2.scale):
        raise ValueError(f"shape mismatch: {s1!r} vs {s2!r}")


def product_symbol(s1: Symbol, s2: Symbol) -> Symbol:
    """Pointwise product sigma_1 sigma_2."""
    _check_compatible(s1, s2)
    tag = f"({s1.tag})*({s2.tag})"
    if isinstance(s1, SeparableSymbol) and isinstance(s2, SeparableSymbol):
        a = (s1.x_factors[:, None, :] * s2.x_factors[None, :, :]).reshape(-1, s1.size)
        b = (s1.xi_factors[:, None, :] * s2.xi_factors[None, :, :]).reshape(-1, s1.size)
        return SeparableSymbol(a, b, dim=s1.dim, scale=s1.scale, tag=tag)
    return TableSymbol(s1.table() * s2.table(), dim=s1.dim, scale=s1.scale, tag=tag)


def exp_symbol(sigma: Symbol) -> TableSymbol:
    return TableSymbol(np.exp(sigma.table()), dim=sigma.dim, scale=sigma.scale,
                       tag=f"exp({sigma.tag})")


def sum_symbol(s1: Symbol, s2: Symbol) -> Symbol:
    _check_compatible(s1, s2)
    tag = f"({s1.tag})+({s2.tag})"
    if isinstance(s1, SeparableSymbol) and isinstance(s2, SeparableSymbol):
        return SeparableSymbol(np.vstack([s1.x_factors, s2.x_factors]),
                               np.vstack([s1.xi_factors, s2.xi_factors]),
                               dim=s1.dim, scale=s1.scale, tag=tag)
    return TableSymbol(s1.table() + s2.table(), dim=s1.dim, scale=s1.scale, tag=tag)


# ---------------------------------------------------------------------------
# binary container

MAGIC = b"RPDOSYM\x01"


def _header_text(sigma: Symbol) -> str:
    lines = [f"dim={sigma.dim}", f"n={sigma.n}", f"scale={sigma.scale}",
             f"tag={json.dumps(sigma.tag)}"]
    for key in sorted(sigma.params):
        lines.append(f"param.{key}={json.dumps(sigma.params[key], sort_keys=True)}")
    return "\n".join(lines) + "\n"


def save_symbol(sigma: Symbol, path) -> Path:
    """Write the binary container at ``path`` and a JSON sidecar at ``path + '.json'``.

    The payload is the row-major complex64 table.
    """
    path = Path(path)
    header = _header_text(sigma).encode("utf-8")
    data = np.ascontiguousarray(sigma.table().astype(np.complex64))
    payload = data.tobytes()
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", len(header)))
        fh.write(header)
        fh.write(payload)
    meta = {
        "format": "roughpdo-symbol",
        "version": 1,
        "dim": sigma.dim,
        "n": sigma.n,
        "scale": sigma.scale,
        "tag": sigma.tag,
        "params": sigma.params,
        "dtype": "complex64",
        "shape": list(data.shape),
        "sha256": hashlib.sha256(payload).hexdigest(),
    }
    Path(str(path) + ".json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return path


def load_symbol(path) -> TableSymbol:
    raw = Path(path).read_bytes()
    if raw[: len(MAGIC)] != MAGIC:
        raise ValueError(f"{path}: not a symbol container")
    (hlen,) = struct.unpack("<I", raw[len(MAGIC): len(MAGIC) + 4])
    start = len(MAGIC) + 4
    header = raw[start: start + hlen].decode("utf-8")
    fields, params = {}, {}
    for line in header.splitlines():
        key, _, value = line.partition("=")
        if key.startswith("param."):
            params[key[len("param."):]] = json.loads(value)
        else:
            fields[key] = value
    dim, n = int(fields["dim"]), int(fields["n"])
    size = n**dim
    payload = raw[start + hlen:]
    sidecar = Path(str(path) + ".json")
    if sidecar.exists() and json.loads(sidecar.read_text())["sha256"] != hashlib.sha256(payload).hexdigest():
        raise ValueError(f"{path}: checksum does not match {sidecar.name}")
    data = np.frombuffer(payload, dtype=np.complex64)
    if data.size != size * size:
        raise ValueError(f"{path}: payload has {data.size} entries, expected {size * size}")
    return TableSymbol(data.reshape(size, size).astype(np.complex128), dim=dim,
                       scale=int(fields["scale"]), tag=json.loads(fields["tag"]), params=params)
