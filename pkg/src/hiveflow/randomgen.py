"""Seeded random instances, flows and hives for the property suites."""

from __future__ import annotations

import random
from typing import Tuple

from .flow import FlowClass
from .grid import Partition, TriangleGrid, VertexId
from .hives import HiveLabel, hive_to_flow

__all__ = [
    "rand_partition", "rand_valid_triple", "rand_positive_triple",
    "random_flow", "random_hive_flow",
]


def rand_partition(rng: random.Random, n: int, top: int) -> Partition:
    return Partition(sorted((rng.randint(0, top) for _ in range(n)), reverse=True))


def rand_valid_triple(rng: random.Random, n: int, top: int) -> Tuple[Partition, Partition, Partition]:
    """lambda, mu random; nu a random partition of |lambda| + |mu|."""
    lam = rand_partition(rng, n, top)
    mu = rand_partition(rng, n, top)
    total = lam.weight + mu.weight
    cuts = sorted(rng.randint(0, total) for _ in range(n - 1))
    parts = [b - a for a, b in zip([0] + cuts, cuts + [total])]
    nu = Partition(sorted(parts, reverse=True))
    return lam, mu, nu


def rand_positive_triple(rng: random.Random, n: int, top: int) -> Tuple[Partition, Partition, Partition]:
    """nu = lambda + mu componentwise, which always admits a tableau."""
    lam = rand_partition(rng, n, top)
    mu = rand_partition(rng, n, top)
    nu = Partition(a + b for a, b in zip(lam.padded(n), mu.padded(n)))
    return lam, mu, nu


def random_flow(grid: TriangleGrid, rng: random.Random, spread: int = 8) -> FlowClass:
    """An arbitrary integral flow class via random vertex labels."""
    vals = [0] + [rng.randint(-spread, spread) for _ in range(grid.num_vertices - 1)]
    return hive_to_flow(HiveLabel(grid, vals))


def random_hive_flow(grid: TriangleGrid, rng: random.Random, spread: int = 6,
                     attempts: int = 40) -> FlowClass:
    """A random hive flow: labels sampled row-major inside the interval the
    already-placed rhombus inequalities leave open (retrying on dead ends)."""
    n = grid.n
    rows = [[VertexId(m, i) for i in range(m + 1)] for m in range(n + 1)]
    for _ in range(attempts):
        values = {VertexId(0, 0): 0}
        ok = True
        for m in range(1, n + 1):
            for v in rows[m]:
                lo, hi = -spread * n, spread * n
                for rho in grid.rhombi:
                    corners = (*rho.obtuse, *rho.acute)
                    if v not in corners:
                        continue
                    others = [c for c in corners if c != v]
                    if any(c not in values for c in others):
                        continue
                    o1, o2 = rho.obtuse
                    a1, a2 = rho.acute
                    if v in rho.obtuse:
                        other = o2 if v == o1 else o1
                        lo = max(lo, values[a1] + values[a2] - values[other])
                    else:
                        other = a2 if v == a1 else a1
                        hi = min(hi, values[o1] + values[o2] - values[other])
                if lo > hi:
                    ok = False
                    break
                values[v] = rng.randint(lo, hi)
            if not ok:
                break
        if ok:
            f = hive_to_flow(HiveLabel.from_mapping(grid, values))
            assert f.is_hive_flow()
            return f
    # sampling kept dead-ending; fall back to the flat zero hive
    return FlowClass.zero(grid)
