from __future__ import annotations

import json
import os
import subprocess
import sys

import numpy as np
import pytest

from roughpdo import experiments as ex


def test_registry_covers_criteria():
    assert len(ex.REGISTRY) == 11
    for exp in ex.REGISTRY.values():
        assert ex.validate_params(exp.name, dict(exp.defaults)) == []


def test_unknown_experiment():
    assert ex.validate_params("nope", {}) == ["unknown experiment 'nope'"]
    with pytest.raises(KeyError):
        ex.run_experiment("nope", {}, 0)


def test_guard_violation_raises():
    with pytest.raises(ValueError, match="power of two"):
        ex.run_experiment("identity-adjoint", {"n": 48}, 0)


def test_radial_quantity_runs():
    _, out, _ = ex.run_experiment("radial-quantity", {"m_values": [2, 3, 4], "radii": 512, "r0": 64.0}, 0)
    assert out.passed
    assert len(out.tables["radial"]) == 3
    assert all(np.isfinite(r["radial"]) for r in out.tables["radial"])


def test_radial_profile_is_thin_annulus():
    prof = ex.radial_profile(3, 64, 32.0)
    assert prof[32] == 0.0 and prof.max() == pytest.approx(1.0)
    assert np.count_nonzero(prof) < np.count_nonzero(ex.radial_profile(1, 64, 32.0))


def test_results_do_not_depend_on_backend():
    code = ("import json; from roughpdo.experiments import run_experiment, to_jsonable;"
            "_, o, _ = run_experiment('identity-adjoint', {'n': 32, 'pairs': 3}, 5);"
            "print(json.dumps(to_jsonable(o.checks)))")
    outs = []
    for backend in ("python", "auto"):
        env = {**os.environ, "ROUGHPDO_BACKEND": backend}
        outs.append(subprocess.run([sys.executable, "-c", code], capture_output=True, text=True,
                                   env=env, check=True).stdout)
    a, b = (json.loads(o) for o in outs)
    assert all(c["passed"] for c in a) and all(c["passed"] for c in b)
    assert [c["name"] for c in a] == [c["name"] for c in b]
