from __future__ import annotations

import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from roughpdo.symbols import (DirectionField, FieldSymbol, SeparableSymbol, TableSymbol, constant_symbol,
                              exp_symbol, from_function, lattice, load_symbol, multiplier_symbol,
                              product_symbol, rescale, save_symbol, sum_symbol)


def test_table_rows_and_guards(rng):
    v = rng.standard_normal((16, 16))
    s = TableSymbol(v)
    assert s.n == 16 and s.dim == 1 and s.size == 16
    assert np.array_equal(s.rows(3, 5), v[3:5])
    assert np.array_equal(s.row_at(7), v[7])
    with pytest.raises(ValueError):
        TableSymbol(np.zeros((16, 8)))


def test_separable_table_is_sum_of_outer_products(rng):
    a, b = rng.standard_normal((3, 32)), rng.standard_normal((3, 32))
    s = SeparableSymbol(a, b)
    assert s.rank == 3
    assert np.allclose(s.table(), sum(np.outer(a[r], b[r]) for r in range(3)))


def test_field_symbol_rows_follow_field():
    field = np.array([0, 1, 1, 0, 2, 2, 2, 0])
    s = FieldSymbol(field, lambda v: np.outer(v + 1.0, np.ones(8)), 8, 1)
    assert np.allclose(s.table()[:, 0], field + 1)
    groups = {float(row[0]): mask for row, mask in s.groups()}
    assert np.array_equal(groups[3.0], field == 2)
    assert not s.x_independent


def test_x_independence_flags():
    assert constant_symbol(16).x_independent
    assert multiplier_symbol(np.arange(16.0)).x_independent
    assert TableSymbol(np.tile(np.arange(16.0), (16, 1))).x_independent
    assert not SeparableSymbol(np.arange(16.0), np.ones(16)).x_independent


def test_table_guard():
    big = constant_symbol(128, dim=2)
    with pytest.raises(MemoryError):
        big.table()


def test_direction_field_validation(rng):
    with pytest.raises(ValueError):
        DirectionField(np.array([1.0, -1.0]), "dilation")
    with pytest.raises(ValueError):
        DirectionField(np.array([7.0]), "angle")
    with pytest.raises(ValueError):
        DirectionField(np.array([1.0]), "speed")
    u = DirectionField.random_dilation(1000, 8.0, rng, distinct=5)
    assert np.unique(u.values).size <= 5
    assert np.all((u.values > 2.0) & (u.values < 32.0))
    a = DirectionField.random_angles(100, rng, grid=4)
    assert set(np.round(a.values / (np.pi / 2)).astype(int)) <= {0, 1, 2, 3}


def test_from_function_layout():
    s = from_function(lambda x, xi: x + 0 * xi + 10 * xi, 1, 8)
    assert s.table()[2, 1] == pytest.approx(2 / 8 + 10 * 1)
    assert s.table()[0, 7] == pytest.approx(-10)
    k1, k2 = lattice(4, 2)
    assert (k1[1], k2[1]) == (0.0, 1.0)


def test_rescale_changes_units_only(rng):
    s = TableSymbol(rng.standard_normal((8, 8)), tag="r")
    t = rescale(s, 2)
    assert t.scale == 2 and s.scale == 0 and t.tag == "r"
    assert np.array_equal(t.table(), s.table())


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_product_and_sum_match_tables(seed):
    g = np.random.default_rng(seed)
    s1 = SeparableSymbol(g.standard_normal((2, 16)), g.standard_normal((2, 16)))
    s2 = SeparableSymbol(g.standard_normal((3, 16)), g.standard_normal((3, 16)))
    t = TableSymbol(g.standard_normal((16, 16)))
    assert np.allclose(product_symbol(s1, s2).table(), s1.table() * s2.table())
    assert isinstance(product_symbol(s1, s2), SeparableSymbol)
    assert np.allclose(product_symbol(s1, t).table(), s1.table() * t.table())
    assert np.allclose(sum_symbol(s1, t).table(), s1.table() + t.table())
    assert np.allclose(exp_symbol(s2).table(), np.exp(s2.table()))


def test_product_needs_matching_scale():
    with pytest.raises(ValueError):
        product_symbol(constant_symbol(8), rescale(constant_symbol(8), 1))


def test_container_roundtrip(tmp_path, rng):
    s = TableSymbol(rng.standard_normal((16, 16)) + 1j * rng.standard_normal((16, 16)), tag="rt",
                    params={"delta": 0.1, "m": 3}, scale=1)
    path = save_symbol(s, tmp_path / "s.rpdo")
    back = load_symbol(path)
    assert np.allclose(back.table(), s.table().astype(np.complex64))
    assert (back.tag, back.scale, back.params) == ("rt", 1, {"delta": 0.1, "m": 3})
    meta = json.loads((tmp_path / "s.rpdo.json").read_text())
    assert meta["shape"] == [16, 16] and meta["dtype"] == "complex64"


def test_container_checksum_and_magic(tmp_path, rng):
    path = save_symbol(TableSymbol(rng.standard_normal((8, 8))), tmp_path / "s.rpdo")
    raw = bytearray(path.read_bytes())
    raw[-1] ^= 0xFF
    path.write_bytes(bytes(raw))
    with pytest.raises(ValueError, match="checksum"):
        load_symbol(path)
    bad = tmp_path / "bad.rpdo"
    bad.write_bytes(b"not a symbol")
    with pytest.raises(ValueError, match="container"):
        load_symbol(bad)
