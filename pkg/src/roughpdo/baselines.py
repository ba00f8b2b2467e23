"""Regression constants measured on a first run and checked on later runs."""

from __future__ import annotations

import json
import os
from pathlib import Path

DEFAULT_PATH = Path(__file__).with_name("data") / "baselines.json"


def baseline_path() -> Path:
    return Path(os.environ.get("ROUGHPDO_BASELINES", DEFAULT_PATH))


def load(path=None) -> dict:
    path = Path(path) if path else baseline_path()
    if not path.exists():
        return {}
    return json.loads(path.read_text())


def save(values: dict, path=None) -> Path:
    path = Path(path) if path else baseline_path()
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(dict(sorted(values.items())), indent=2) + "\n")
    return path


def update(new: dict, path=None) -> Path:
    values = load(path)
    values.update(new)
    return save(values, path)
