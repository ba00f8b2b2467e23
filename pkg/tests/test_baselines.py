from __future__ import annotations

import json

from roughpdo import baselines


def test_missing_file_is_empty(tmp_path):
    assert baselines.load(tmp_path / "none.json") == {}


def test_update_merges(tmp_path):
    path = tmp_path / "b.json"
    baselines.save({"b": 2.0, "a": 1.0}, path)
    baselines.update({"a": 3.0}, path)
    assert json.loads(path.read_text()) == {"a": 3.0, "b": 2.0}


def test_env_override(tmp_path, monkeypatch):
    path = tmp_path / "env.json"
    monkeypatch.setenv("ROUGHPDO_BASELINES", str(path))
    baselines.save({"x": 1.0})
    assert baselines.load() == {"x": 1.0}


def test_shipped_baselines_cover_recorded_constants():
    known = baselines.load(baselines.DEFAULT_PATH)
    for key in ("theorem1.C_star", "carleson.C_max", "kernels.l1_max", "algebra.C", "algebra.exp_c",
                "bernstein.1,2", "bernstein.2,inf", "bernstein.1,inf"):
        assert key in known and known[key] > 0
