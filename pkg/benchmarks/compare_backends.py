#!/usr/bin/env python3
"""Compare the pure-Python and compiled kernels on the scaling solver.

Usage: python benchmarks/compare_backends.py [--sizes 25,50,100] [--top 500000]

For each grid size a random positive instance (nu = lambda + mu) is solved
with both backends; results must agree exactly, only the wall time differs.
"""

import argparse
import pathlib
import random
import sys
import time

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from hiveflow import _kernels  # noqa: E402
from hiveflow._kernels import get_backends  # noqa: E402
from hiveflow.randomgen import rand_positive_triple  # noqa: E402
from hiveflow.solver import decide_scaling  # noqa: E402


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default="25,50,100")
    ap.add_argument("--top", type=int, default=500_000,
                    help="largest random part of lambda and mu")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    backends = get_backends()
    print(f"available backends: {', '.join(backends)}")
    print(f"{'n':>5} {'nu1':>9} {'aug':>6} {'bfs':>6} "
          + " ".join(f"{name+' [s]':>10}" for name in backends))

    for n in sizes:
        rng = random.Random(args.seed + n)
        lam, mu, nu = rand_positive_triple(rng, n, args.top)
        row = {}
        reports = {}
        for name, impl in backends.items():
            _kernels.impl = impl
            t0 = time.perf_counter()
            reports[name] = decide_scaling(lam, mu, nu, strict=False)
            row[name] = time.perf_counter() - t0
        base = reports[next(iter(backends))]
        for name, rep in reports.items():
            assert rep.positive == base.positive
            assert rep.final_flow == base.final_flow
        print(f"{n:>5} {nu[0]:>9} {base.total_augmentations:>6} {base.bfs_calls:>6} "
              + " ".join(f"{row[name]:>10.3f}" for name in backends))
    return 0


if __name__ == "__main__":
    sys.exit(main())
