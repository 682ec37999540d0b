"""Desk-scale exact machinery: all capacity achieving integral hive flows,
hive-preserving and secure cycles, and the neighbor graph they generate.

Counting is #P-hard, so everything here is backtracking with hard caps,
meant for small grids; the solver handles the large-scale decision problem.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from .errors import CapExceededError, InvalidInstanceError
from .flow import FlowClass
from .grid import (CapacityMap, Partition, TriangleGrid, Turn, TurnEdge,
                   VertexId, border_capacities, common_length, new_grid)
from .hives import HiveLabel, hive_to_flow
from .residual import _turn_graph, project
from .solver import decide_scaling

__all__ = [
    "enumerate_P", "GCycle", "is_f_hive_preserving", "is_f_secure",
    "find_secure_cycle", "PzGraph", "build_pz_graph", "multiplicity_free",
]

DEFAULT_LIMIT = 10 ** 6


# -- enumeration of P_Z ---------------------------------------------------------


def _border_labels(caps: CapacityMap) -> dict:
    """Hive labels on the boundary are the partial sums of the partitions."""
    n = caps.grid.n
    lam, mu, nu = caps.lam, caps.mu, caps.nu
    vals: dict = {VertexId(0, 0): 0}
    acc = 0
    for m in range(1, n + 1):  # right border: x(m,m) carries lam_1+..+lam_m
        acc += lam[m - 1]
        vals[VertexId(m, m)] = acc
    acc = 0
    for m in range(1, n + 1):  # left border: partial sums of nu
        acc += nu[m - 1]
        vals[VertexId(m, 0)] = acc
    acc = lam.weight
    for c in range(n - 1, 0, -1):  # bottom border, right to left: add mu
        acc += mu[n - 1 - c]
        vals[VertexId(n, c)] = acc
    return vals


def enumerate_P(lam, mu, nu, limit: int = DEFAULT_LIMIT) -> list:
    """All integral capacity achieving hive flows, as FlowClass values.

    The count equals the Littlewood-Richardson coefficient.  Backtracks over
    interior hive labels row-major, clipping each vertex to the interval its
    already-placed rhombus inequalities allow; aborts with CapExceededError
    past `limit` points.
    """
    lam, mu, nu = Partition(lam), Partition(mu), Partition(nu)
    n = common_length(lam, mu, nu)
    grid = new_grid(n)
    caps = border_capacities(grid, lam, mu, nu)
    border = _border_labels(caps)

    interior = [VertexId(m, i) for m in range(2, n) for i in range(1, m)]
    order = {v: q for q, v in enumerate(interior)}

    def vertex_order(v: VertexId) -> int:
        return order.get(v, -1)

    # rhombus becomes checkable when its last corner (row-major) is placed
    by_last: dict = {}
    for rho in grid.rhombi:
        corners = (*rho.acute, *rho.obtuse)
        last = max(corners, key=vertex_order)
        if vertex_order(last) >= 0:
            by_last.setdefault(last, []).append(rho)
        # rhombi with all corners on the border are checked once up front
    values = dict(border)
    for rho in grid.rhombi:
        corners = (*rho.acute, *rho.obtuse)
        if all(vertex_order(v) < 0 for v in corners):
            o1, o2 = rho.obtuse
            a1, a2 = rho.acute
            if values[o1] + values[o2] - values[a1] - values[a2] < 0:
                return []

    hi_global = n * max(caps.nu.weight, 1)
    out: List[FlowClass] = []

    def backtrack(q: int) -> None:
        if q == len(interior):
            h = HiveLabel.from_mapping(grid, values)
            out.append(hive_to_flow(h))
            if len(out) > limit:
                raise CapExceededError(limit)
            return
        v = interior[q]
        lo, hi = 0, hi_global
        checks = []
        for rho in by_last.get(v, ()):
            o1, o2 = rho.obtuse
            a1, a2 = rho.acute
            if v == o1 or v == o2:
                other = o2 if v == o1 else o1
                lo = max(lo, values[a1] + values[a2] - values[other])
            else:
                other = a2 if v == a1 else a1
                hi = min(hi, values[o1] + values[o2] - values[other])
        for x in range(lo, hi + 1):
            values[v] = x
            backtrack(q + 1)
        values.pop(v, None)

    backtrack(0)
    return out


# -- proper cycles in the honeycomb graph ------------------------------------------


@dataclass(frozen=True)
class GCycle:
    """A proper cycle, held as its turn sequence and induced flow class."""

    grid: TriangleGrid
    turn_ids: tuple
    flow: FlowClass

    @classmethod
    def from_turn_ids(cls, grid: TriangleGrid, turn_ids: Sequence[int]) -> "GCycle":
        turn_ids = tuple(int(t) for t in turn_ids)
        tg = _turn_graph(grid)
        tris = [t // 6 for t in turn_ids]
        whites = [int(tg.out_edge[t]) for t in turn_ids]
        if len(set(tris)) != len(tris) or len(set(whites)) != len(whites):
            raise ValueError("turn sequence revisits a honeycomb vertex")
        for a, b in zip(turn_ids, turn_ids[1:] + turn_ids[:1]):
            if tg.out_edge[a] != tg.in_edge[b]:
                raise ValueError("turn sequence does not close into a cycle")
        flow = project(grid, turn_ids)
        if flow.throughput() != 0:
            raise ValueError("proper cycles carry no overall throughput")
        return cls(grid, turn_ids, flow)

    def __len__(self) -> int:
        return len(self.turn_ids)

    @property
    def turns(self) -> tuple:
        return tuple(self.grid.turn_by_id(t) for t in self.turn_ids)

    def turnedge_pairs(self) -> set:
        ids = self.turn_ids
        return set(zip(ids, ids[1:] + ids[:1]))


def _uses(grid: TriangleGrid, turn_set: set, pair_set: set, x) -> bool:
    if isinstance(x, TurnEdge):
        return (grid.turn_id(x.tail), grid.turn_id(x.head)) in pair_set
    return grid.turn_id(x) in turn_set


def is_f_hive_preserving(f: FlowClass, c: GCycle) -> bool:
    """A proper cycle is hive preserving when it uses no negative slack
    contribution of any flat rhombus (then f + eps*c stays bounded)."""
    if f.grid.n != c.grid.n:
        from .errors import GridMismatchError
        raise GridMismatchError("cycle and flow live on different grids")
    grid = f.grid
    turn_set = set(c.turn_ids)
    pair_set = c.turnedge_pairs()
    sigma = f.slack_vector()
    for rho in grid.rhombi:
        if sigma[rho.index] != 0:
            continue
        sc = grid.slack_contributions(rho)
        if any(_uses(grid, turn_set, pair_set, x) for x in sc.minus):
            return False
    return True


def is_f_secure(f: FlowClass, c: GCycle) -> bool:
    """Hive preserving, and in no nearly flat rhombus (slack one) does the
    cycle take both counterclockwise acute turns."""
    if not is_f_hive_preserving(f, c):
        return False
    grid = f.grid
    turn_set = set(c.turn_ids)
    sigma = f.slack_vector()
    for rho in grid.rhombi:
        if sigma[rho.index] != 1:
            continue
        sc = grid.slack_contributions(rho)
        ccw_acute = [x for x in sc.minus if isinstance(x, Turn)]
        if all(grid.turn_id(x) in turn_set for x in ccw_acute):
            return False
    return True


def find_secure_cycle(f: FlowClass, max_len: Optional[int] = None) -> Optional[GCycle]:
    """Shortest hive-preserving proper cycle, or None when no such cycle
    exists (then f is the unique capacity achieving point).

    Breadth-first over turn sequences with distinct honeycomb vertices,
    restricted to turns and turnedges that survive in the residual digraph
    of f; the shortest survivor is secure, which is asserted.
    """
    grid = f.grid
    tg = _turn_graph(grid)
    if max_len is None:
        max_len = grid.num_turns

    # deletions induced by flat rhombi, as in the residual digraph
    from . import _kernels
    sigma = f.slack_vector()
    turn_alive = np.ones(grid.num_turns, dtype=np.uint8)
    slot_alive = np.ones((grid.num_turns, 2), dtype=np.uint8)
    _kernels.impl.build_masks(sigma, tg.minus_turns, tg.minus_src, tg.minus_slot,
                              turn_alive, slot_alive)

    adj = tg.adj
    in_edge = tg.in_edge
    out_edge = tg.out_edge

    # states: (current turn, visited triangles, visited whites, path);
    # cycles are normalized to start at their minimal alive turn id
    level = []
    for t0 in range(grid.num_turns):
        if turn_alive[t0]:
            level.append((t0, t0, frozenset([t0 // 6]), frozenset([int(out_edge[t0])]), (t0,)))
    length = 1
    while level and length < max_len:
        nxt = []
        for start, cur, tris, whites, path in level:
            for slot in (0, 1):
                v = int(adj[cur, slot])
                if v < 0 or not slot_alive[cur, slot]:
                    continue
                if v == start:
                    if int(in_edge[start]) == int(out_edge[cur]):
                        cycle = GCycle.from_turn_ids(grid, path)
                        assert is_f_hive_preserving(f, cycle)
                        assert is_f_secure(f, cycle), "shortest cycle must be secure"
                        return cycle
                    continue
                if v < start or not turn_alive[v]:
                    continue
                tri = v // 6
                w = int(out_edge[v])
                if tri in tris or w in whites:
                    continue
                nxt.append((start, v, tris | {tri}, whites | {w}, path + (v,)))
        level = nxt
        length += 1
    return None


# -- the neighbor graph on P_Z -----------------------------------------------------


@dataclass
class PzGraph:
    points: list  # FlowClass
    edges: list  # (i, j) index pairs, i < j

    def adjacency(self) -> dict:
        adj: dict = {i: set() for i in range(len(self.points))}
        for i, j in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        return adj

    def is_connected(self) -> bool:
        if not self.points:
            return True
        adj = self.adjacency()
        seen = {0}
        stack = [0]
        while stack:
            for j in adj[stack.pop()]:
                if j not in seen:
                    seen.add(j)
                    stack.append(j)
        return len(seen) == len(self.points)


def _difference_cycle(f: FlowClass, g: FlowClass) -> Optional[GCycle]:
    """The proper cycle g - f, or None when the difference is not a single
    cycle.  Capacity achieving pairs vanish on the border, so the support
    decomposes into turns chained through the interior."""
    grid = f.grid
    d = g.delta - f.delta
    if not d.any():
        return None
    if np.abs(d).max() > 1:
        return None
    if d[grid._border_kind != 0].any():
        return None
    # one entering and one leaving side per used triangle
    turns_by_tri: dict = {}
    for tri_idx in range(grid.num_triangles):
        t = grid.triangles[tri_idx]
        sides = grid._triangle_side_ids(tri_idx)
        sgn = 1 if t.upright else -1
        into = [sgn * int(d[e]) for e in sides]
        used = [x for x in into if x]
        if not used:
            continue
        if sorted(used) != [-1, 1]:
            return None
        turns_by_tri[tri_idx] = (sides[into.index(1)], sides[into.index(-1)])

    from .grid import _TURN_SLOTS
    start_tri = min(turns_by_tri)
    seq = []
    tri = start_tri
    while True:
        e_in, e_out = turns_by_tri[tri]
        sides = grid._triangle_side_ids(tri)
        slot = _TURN_SLOTS.index((sides.index(e_in), sides.index(e_out)))
        seq.append(tri * 6 + slot)
        a, b = grid._edge_tris[e_out]
        nxt = int(b if a == tri else a)
        if nxt < 0 or nxt not in turns_by_tri:
            return None
        if nxt == start_tri:
            break
        tri = nxt
    if len(seq) != len(turns_by_tri):
        return None  # several disjoint cycles
    try:
        cycle = GCycle.from_turn_ids(grid, seq)
    except ValueError:
        return None
    if cycle.flow != FlowClass(grid, d, validate=False):
        return None
    return cycle


def build_pz_graph(points: Sequence[FlowClass]) -> PzGraph:
    """Neighbor graph: two points are adjacent when their difference is a
    proper cycle; every adjacent difference is verified secure."""
    points = list(points)
    edges = []
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            c = _difference_cycle(points[i], points[j])
            if c is not None:
                assert is_f_secure(points[i], c), "neighbor difference must be secure"
                edges.append((i, j))
    return PzGraph(points=points, edges=edges)


def multiplicity_free(lam, mu, nu) -> bool:
    """Whether the coefficient equals one: take the solver's witness and
    look for any hive-preserving cycle through it."""
    report = decide_scaling(lam, mu, nu)
    if not report.positive:
        raise InvalidInstanceError("multiplicity test needs a positive instance")
    return find_secure_cycle(report.final_flow) is None
