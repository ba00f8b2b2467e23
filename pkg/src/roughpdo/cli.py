"""Command-line runner for the named experiments.

    roughpdo list
    roughpdo validate configs/counterexample-growth.yaml
    roughpdo run configs/counterexample-growth.yaml --out-dir runs
    roughpdo record-baselines

Exit codes: 0 all assertions pass, 1 an assertion failed, 2 the config is
invalid (a JSON error document goes to stderr).
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from . import __version__, baselines, pdo
from ._backend import BACKEND
from .experiments import REGISTRY, run_experiment, to_jsonable, validate_params

SCHEMA_VERSION = 1
CONFIG_KEYS = {"experiment", "seed", "params", "out_dir"}

logger = logging.getLogger("roughpdo")


class ConfigError(ValueError):
    def __init__(self, diagnostics):
        super().__init__("; ".join(diagnostics))
        self.diagnostics = list(diagnostics)


@dataclass
class ExperimentConfig:
    experiment: str
    seed: int
    params: dict = field(default_factory=dict)
    out_dir: str = "runs"

    @classmethod
    def from_mapping(cls, raw) -> "ExperimentConfig":
        diags = config_diagnostics(raw)
        if diags:
            raise ConfigError(diags)
        return cls(raw["experiment"], int(raw["seed"]), dict(raw.get("params") or {}),
                   str(raw.get("out_dir", "runs")))

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        return cls.from_mapping(read_config(path))

    def merged_params(self) -> dict:
        return {**REGISTRY[self.experiment].defaults, **self.params}


def read_config(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError([f"cannot read {path}: {exc.strerror}"]) from None
    try:
        return yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError([f"malformed YAML: {exc}"]) from None


def _type_ok(default, value) -> bool:
    if isinstance(default, bool):
        return isinstance(value, bool)
    if isinstance(default, int):
        return isinstance(value, int) and not isinstance(value, bool)
    if isinstance(default, float):
        return isinstance(value, (int, float)) and not isinstance(value, bool)
    if isinstance(default, list):
        return isinstance(value, list) and all(_type_ok(default[0], v) for v in value) and len(value) > 0
    return isinstance(value, type(default))


def config_diagnostics(raw) -> list:
    """Every problem with a parsed config, as human-readable messages; empty when valid."""
    if not isinstance(raw, dict):
        return ["config must be a mapping"]
    diags = [f"unknown key {k!r}" for k in sorted(set(raw) - CONFIG_KEYS)]
    if "seed" not in raw:
        diags.append("seed is mandatory")
    elif not isinstance(raw["seed"], int) or isinstance(raw["seed"], bool) or raw["seed"] < 0:
        diags.append(f"seed must be a non-negative integer, got {raw['seed']!r}")
    name = raw.get("experiment")
    if name not in REGISTRY:
        diags.append(f"unknown experiment {name!r}; choose from {', '.join(REGISTRY)}")
        return diags
    params = raw.get("params") or {}
    if not isinstance(params, dict):
        return diags + ["params must be a mapping"]
    defaults = REGISTRY[name].defaults
    for key, value in params.items():
        if key not in defaults:
            diags.append(f"params.{key}: not a parameter of {name}")
        elif not _type_ok(defaults[key], value):
            diags.append(f"params.{key}: expected {type(defaults[key]).__name__}, got {value!r}")
    if diags:
        return diags
    merged = {**defaults, **params}
    for k, v in merged.items():
        if isinstance(defaults[k], float) and isinstance(v, int):
            merged[k] = float(v)
    return [f"guard: {msg}" for msg in validate_params(name, merged)]


def _write_tables(tables: dict, folder: Path) -> list:
    paths = []
    for name, rows in tables.items():
        if not rows:
            continue
        path = folder / f"{name}.csv"
        with open(path, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=list(rows[0]))
            writer.writeheader()
            writer.writerows(to_jsonable(rows))
        paths.append(path.name)
    return paths


def canonical(report: dict) -> str:
    """Report JSON without the timing field; equal across reruns of one (config, seed)."""
    body = {k: v for k, v in report.items() if k != "timing"}
    return json.dumps(body, indent=2, sort_keys=False)


def run(config: ExperimentConfig, out_dir=None) -> dict:
    """Run one experiment and write report.json plus one CSV per table."""
    params = config.merged_params()
    merged, outcome, seconds = run_experiment(config.experiment, params, config.seed)
    folder = Path(out_dir or config.out_dir) / config.experiment
    folder.mkdir(parents=True, exist_ok=True)
    files = _write_tables(outcome.tables, folder)
    report = {
        "schema_version": SCHEMA_VERSION,
        "version": __version__,
        "config": {"experiment": config.experiment, "seed": config.seed, "params": merged},
        "criterion": REGISTRY[config.experiment].criterion,
        "results": outcome.results,
        "assertions": outcome.checks,
        "baseline_candidates": outcome.candidates,
        "passed": outcome.passed,
        "artifacts": sorted(files + ["report.json"]),
        "timing": {"seconds": round(seconds, 3), "backend": BACKEND},
    }
    report = to_jsonable(report)
    report["digest"] = hashlib.sha256(canonical(report).encode()).hexdigest()
    (folder / "report.json").write_text(json.dumps(report, indent=2) + "\n")
    return report


def _error(kind: str, diagnostics) -> int:
    json.dump({"error": kind, "diagnostics": list(diagnostics)}, sys.stderr, indent=2)
    sys.stderr.write("\n")
    return 2


def _load(args):
    raw = read_config(args.config)
    if isinstance(raw, dict) and args.seed is not None:
        raw = {**raw, "seed": args.seed}
    return ExperimentConfig.from_mapping(raw)


def cmd_list(args) -> int:
    width = max(map(len, REGISTRY))
    for name, exp in REGISTRY.items():
        print(f"{name:<{width}}  {exp.criterion}")
    return 0


def cmd_validate(args) -> int:
    try:
        _load(args)
    except ConfigError as exc:
        return _error("config", exc.diagnostics)
    print(json.dumps({"diagnostics": []}))
    return 0


def cmd_run(args) -> int:
    try:
        config = _load(args)
    except ConfigError as exc:
        return _error("config", exc.diagnostics)
    report = run(config, args.out_dir)
    failed = [a for a in report["assertions"] if not a["passed"]]
    print(f"{config.experiment}: {'PASS' if report['passed'] else 'FAIL'} "
          f"({len(report['assertions']) - len(failed)}/{len(report['assertions'])} assertions, "
          f"{report['timing']['seconds']:.1f}s)")
    for a in failed:
        print(f"  failed: {a['name']} value={a['value']} threshold={a['threshold']}")
    return 0 if report["passed"] else 1


def cmd_record(args) -> int:
    names = args.experiments or [n for n in REGISTRY]
    unknown = [n for n in names if n not in REGISTRY]
    if unknown:
        return _error("config", [f"unknown experiment {n!r}" for n in unknown])
    seed = 0 if args.seed is None else args.seed
    found = {}
    for name in names:
        _, outcome, _ = run_experiment(name, {}, seed)
        found.update(outcome.candidates)
    path = baselines.update(found)
    print(json.dumps({"path": str(path), "recorded": found}, indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="roughpdo", description="Rough-symbol operator experiments.")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--threads", type=int, default=1, help="worker threads (0 = all CPUs)")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("list", help="list named experiments")
    p.set_defaults(func=cmd_list)

    for name, func, text in (("run", cmd_run, "run an experiment config"),
                             ("validate", cmd_validate, "check a config without running it")):
        p = sub.add_parser(name, help=text)
        p.add_argument("config")
        p.add_argument("--seed", type=int, help="override the config seed")
        if name == "run":
            p.add_argument("--out-dir", help="override the config output directory")
        p.set_defaults(func=func)

    p = sub.add_parser("record-baselines", help="measure regression constants and store them")
    p.add_argument("experiments", nargs="*")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_record)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    pdo.set_threads(args.threads)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
