"""End-to-end acceptance criteria, one named experiment each.

Every test prints a line ``AC<k> <experiment>: PASS|FAIL`` (collected in the
terminal summary) and enforces the runtime budget.  Run directly with
``python tests/test_acceptance.py`` to get just the summary lines.
"""

from __future__ import annotations

import json
import math
import sys

import pytest

from roughpdo import cli
from roughpdo.experiments import run_experiment

pytestmark = pytest.mark.acceptance

CRITERIA = [
    (1, "identity-adjoint", 10),
    (2, "counterexample-growth", 120),
    (3, "theorem1-bound-sweep", 300),
    (4, "scale-invariance", 60),
    (5, "carleson-domination", 300),
    (6, "thin-circle-norms", 600),
    (7, "directional-sharpness", 180),
    (8, "cap-kernel-certificates", 300),
    (9, "algebra-check", 180),
    (10, "infrastructure", 60),
]


def evaluate(k, name, budget, seed=0):
    _, outcome, seconds = run_experiment(name, {}, seed)
    failed = [c["name"] for c in outcome.checks if not c["passed"]]
    if seconds > budget:
        failed.append(f"runtime {seconds:.1f}s > {budget}s")
    extra = _extra_checks(k, outcome)
    failed += extra
    status = "PASS" if not failed else "FAIL"
    line = f"AC{k:<2} {name}: {status} ({seconds:.1f}s / {budget}s)"
    if failed:
        line += " failed: " + "; ".join(failed)
    return line, failed, outcome


def _extra_checks(k, outcome):
    """Oracles that live outside the experiment code."""
    failed = []
    if k == 2:
        for row in outcome.tables["growth"]:
            oracle = math.fsum(1.0 / j for j in range(8, row["n_terms"] + 1))
            if abs(row["ratio"] - oracle) > 0.005 * oracle:
                failed.append(f"N_terms={row['n_terms']} ratio {row['ratio']} vs {oracle}")
    if k == 10:
        import tempfile

        with tempfile.TemporaryDirectory() as tmp:
            config = cli.ExperimentConfig("infrastructure", 0)
            a = cli.run(config, f"{tmp}/a")
            b = cli.run(config, f"{tmp}/b")
            if cli.canonical(a) != cli.canonical(b):
                failed.append("reports differ between identical runs")
            on_disk = [json.loads(open(f"{tmp}/{d}/infrastructure/report.json").read()) for d in "ab"]
            if cli.canonical(on_disk[0]) != cli.canonical(on_disk[1]):
                failed.append("report files differ between identical runs")
    return failed


@pytest.mark.parametrize("k,name,budget", CRITERIA, ids=[f"AC{k}-{n}" for k, n, _ in CRITERIA])
def test_acceptance(k, name, budget, acceptance_log):
    line, failed, _ = evaluate(k, name, budget)
    acceptance_log.append(line)
    print(line)
    assert not failed, line


if __name__ == "__main__":
    bad = 0
    for k, name, budget in CRITERIA:
        line, failed, _ = evaluate(k, name, budget)
        print(line, flush=True)
        bad += bool(failed)
    sys.exit(1 if bad else 0)
