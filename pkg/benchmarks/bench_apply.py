"""Time the generic phase-sum apply on the compiled and numpy backends.

    python benchmarks/bench_apply.py --sizes 256 512 1024 --repeat 3
"""

from __future__ import annotations

import argparse
import json
import time

import numpy as np

from roughpdo import pdo
from roughpdo._backend import load
from roughpdo.grid import GridFn
from roughpdo.symbols import TableSymbol


def best_time(func, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        func()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench(n: int, repeat: int, rng) -> dict:
    sigma = TableSymbol(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    f = GridFn(rng.standard_normal(n) + 1j * rng.standard_normal(n))
    row = {"n": n}
    outputs = {}
    for name in ("cython", "python"):
        try:
            load(name)
        except ImportError:
            row[name] = None
            continue
        outputs[name] = pdo.apply(sigma, f, path="generic", backend=name).values
        row[name] = best_time(lambda: pdo.apply(sigma, f, path="generic", backend=name), repeat)
    if len(outputs) == 2:
        row["max_diff"] = float(np.abs(outputs["cython"] - outputs["python"]).max())
        row["speedup"] = row["python"] / row["cython"]
    return row


def main(argv=None) -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[128, 256, 512, 1024])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--json", action="store_true", help="print rows as JSON")
    args = parser.parse_args(argv)
    rng = np.random.default_rng(args.seed)
    rows = [bench(n, args.repeat, rng) for n in args.sizes]
    if args.json:
        print(json.dumps(rows, indent=2))
        return
    print(f"{'n':>6} {'cython s':>10} {'python s':>10} {'speedup':>8} {'max diff':>10}")
    for r in rows:
        cy = "n/a" if r["cython"] is None else f"{r['cython']:.4f}"
        print(f"{r['n']:>6} {cy:>10} {r['python']:>10.4f} {r.get('speedup', float('nan')):>8.2f} "
              f"{r.get('max_diff', float('nan')):>10.2e}")


if __name__ == "__main__":
    main()
