"""Independent ground truth: counting Littlewood-Richardson skew tableaux.

Fillings of the skew shape nu/lambda with content mu are generated by
backtracking in reverse-reading-word order (rows top to bottom, cells right
to left), so the lattice-word condition prunes on exact prefix counts and
the row/column comparisons always reference already-placed cells.

This module must stay independent of the flow machinery: it is the oracle
the solver and the enumerator are checked against.
"""

from __future__ import annotations

from typing import Iterator, List, Optional

from .grid import Partition

__all__ = ["lr_count", "lr_positive", "lr_tableaux"]


def _prepared(lam, mu, nu) -> Optional[tuple]:
    lam, mu, nu = Partition(lam), Partition(mu), Partition(nu)
    if nu.weight != lam.weight + mu.weight:
        return None
    rows = max(len(nu), len(lam), 1)
    outer = Partition(nu).padded(rows)
    inner = Partition(lam).padded(rows)
    if any(inner[i] > outer[i] for i in range(rows)):
        return None  # lambda not contained in nu
    # cells in reverse reading order: rows top to bottom, right to left
    cells = [(r, c) for r in range(rows)
             for c in range(outer[r] - 1, inner[r] - 1, -1)]
    return outer, inner, tuple(mu), cells


def _fillings(lam, mu, nu) -> Iterator[tuple]:
    """Yield the valid fillings lazily, as row tuples with 0 on inner cells."""
    prep = _prepared(lam, mu, nu)
    if prep is None:
        return
    outer, inner, content, cells = prep
    kinds = len(content)
    if not cells:
        yield ()
        return
    if kinds == 0:
        return

    grid: List[List[int]] = [[0] * outer[r] for r in range(len(outer))]
    counts = [0] * (kinds + 1)

    def place(idx: int) -> Iterator[tuple]:
        if idx == len(cells):
            yield tuple(tuple(row) for row in grid)
            return
        r, c = cells[idx]
        # row weakly increasing towards the right neighbour (placed earlier)
        hi = grid[r][c + 1] if c + 1 < outer[r] else kinds
        # column strictly increasing below a filled cell of the row above
        lo = grid[r - 1][c] + 1 if r > 0 and inner[r - 1] <= c < outer[r - 1] else 1
        for v in range(lo, hi + 1):
            if counts[v] >= content[v - 1]:
                continue
            if v > 1 and counts[v] >= counts[v - 1]:
                continue  # the reverse reading word would lose latticeness
            counts[v] += 1
            grid[r][c] = v
            yield from place(idx + 1)
            counts[v] -= 1
        grid[r][c] = 0

    yield from place(0)


def lr_count(lam, mu, nu) -> int:
    """Number of lattice skew tableaux of shape nu/lambda and content mu."""
    return sum(1 for _ in _fillings(lam, mu, nu))


def lr_positive(lam, mu, nu) -> bool:
    """Whether at least one tableau exists (stops at the first)."""
    return next(iter(_fillings(lam, mu, nu)), None) is not None


def lr_tableaux(lam, mu, nu) -> list:
    """All tableaux, materialized."""
    return list(_fillings(lam, mu, nu))
