from __future__ import annotations

import numpy as np
import pytest

from roughpdo import kernels as ker
from roughpdo.grid import GridFn


@pytest.fixture(scope="module")
def cap():
    return ker.cap_kernel(2, 0.0, 4, 256)


def test_kernel_at_origin_is_multiplier_sum(cap):
    assert cap.samples.values[0, 0] == pytest.approx(cap.multiplier.sum())


def test_l1_dominates_multiplier(cap):
    # |Khat| <= ||K||_1 with Khat the multiplier
    assert ker.kernel_l1(cap) >= np.abs(cap.multiplier).max() - 1e-12


def test_cap_guards():
    with pytest.raises(ValueError):
        ker.cap_kernel(6, 0.0, 4, 256)
    with pytest.raises(ValueError):
        ker.cap_kernel(1, 0.0, 5, 256)


def test_certificate_on_aligned_cap(cap):
    c = ker.decay_certificate(cap, 2.0)
    assert c.passed
    assert c.along_exponent is not None and c.along_exponent >= 2
    assert '"passed": true' in c.to_json()


def test_certificate_rejects_noise(rng):
    noise = ker.CapKernel(0, 0.0, 4, GridFn(rng.standard_normal((256, 256))), None)
    assert not ker.decay_certificate(noise).passed


def test_onset_grows_across_theta():
    onsets = [ker.onset_distance(ker.cap_kernel(l, 0.0, 4, 256), "across") for l in (1, 3, 5)]
    assert onsets[0] < onsets[1] < onsets[2]


def test_shell_csv(tmp_path, cap):
    lines = ker.write_shell_csv(cap, tmp_path / "s.csv").read_text().splitlines()
    assert lines[0] == "shell,axis,max_abs"
    assert {ln.split(",")[1] for ln in lines[1:]} == {"along", "across"}


def test_uniformity_record():
    rec = ker.l1_uniformity([1, 2], [0.0, np.pi / 2], 4, 256)
    assert len(rec.table) == 4
    assert rec.ratio == pytest.approx(rec.max / rec.min)
    assert rec.passes() and rec.passes(rec.max) and not rec.passes(rec.max * 0.5)
    # rotating by pi/2 maps the lattice to itself
    assert rec.table["1:0.000000"] == pytest.approx(rec.table[f"1:{np.pi / 2:.6f}"])


def test_cone_partition_of_unity():
    n = 64
    for l in (0, 1, 2, 3):
        parts = ker.cone_partition(l, n)
        assert len(parts) == len(ker.cone_centers(l))
        total = np.sum(parts, axis=0)
        assert total[0, 0] == 0.0
        off = np.ones((n, n), dtype=bool)
        off[0, 0] = False
        assert np.allclose(total[off], 1.0)
    assert ker.cone_overlap(ker.cone_partition(2, n)) <= 3
    with pytest.raises(ValueError):
        ker.cone_partition(6, 64)


def test_cone_square_function_bounds(rng):
    n, k0 = 128, 3
    g = GridFn(rng.standard_normal((n, n)))
    # nonnegative parts summing to one: sum_m b_m^2 <= 1, so the ratio is at most 1
    assert ker.cone_lp_sum_check(2, g, 2.0, k0) <= 1.0 + 1e-12
    parts = ker.cone_partition(2, n)
    gs = [GridFn(rng.standard_normal((n, n))) for _ in parts]
    assert ker.cone_lp_sum_check(2, gs, 2.0, k0) <= np.sqrt(ker.cone_overlap(parts)) + 1e-12
    with pytest.raises(ValueError):
        ker.cone_lp_sum_check(2, g, 1.5, k0)
    with pytest.raises(ValueError):
        ker.cone_lp_sum_check(2, gs[:3], 2.0, k0)
