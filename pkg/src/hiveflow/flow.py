"""Flow classes on the honeycomb graph, stored as throughput vectors.

A flow class is determined by its throughputs delta(k) through the grid
edges, signed as flow into the unique upright triangle containing k, and
subject to the closedness law: the three signed throughputs of every hive
triangle sum to zero.
"""

from __future__ import annotations

from typing import Mapping

import numpy as np

from .errors import FlowConsistencyError, GridMismatchError
from .grid import CapacityMap, EdgeId, Rhombus, TriangleGrid, TriangleId

__all__ = [
    "FlowClass", "zero_flow", "slack", "is_hive_flow", "in_B", "in_P",
    "overall_throughput", "norm", "distance", "add_scaled", "decompose",
]


class FlowClass:
    """An integral flow class, canonically a vector delta: E(grid) -> Z."""

    __slots__ = ("grid", "delta")

    def __init__(self, grid: TriangleGrid, delta, validate: bool = True):
        self.grid = grid
        arr = np.asarray(delta, dtype=np.int64)
        if arr.shape != (grid.num_edges,):
            raise ValueError(f"expected {grid.num_edges} throughputs, got {arr.shape}")
        arr = arr.copy()
        arr.setflags(write=False)
        self.delta = arr
        if validate:
            self.check_closedness()

    # -- construction -------------------------------------------------------

    @classmethod
    def zero(cls, grid: TriangleGrid) -> "FlowClass":
        return cls(grid, np.zeros(grid.num_edges, dtype=np.int64), validate=False)

    @classmethod
    def from_mapping(cls, grid: TriangleGrid, mapping: Mapping[EdgeId, int]) -> "FlowClass":
        arr = np.zeros(grid.num_edges, dtype=np.int64)
        for e, v in mapping.items():
            arr[grid.edge_index(e)] = v
        return cls(grid, arr)

    def check_closedness(self) -> None:
        g = self.grid
        d = self.delta
        for tri_idx in range(g.num_triangles):
            s = sum(int(d[e]) for e in g._triangle_side_ids(tri_idx))
            if s != 0:
                raise FlowConsistencyError(
                    f"closedness violated at {g.triangles[tri_idx]}: sum {s}"
                )

    # -- basic accessors ------------------------------------------------------

    def __getitem__(self, e: EdgeId) -> int:
        return int(self.delta[self.grid.edge_index(e)])

    def as_dict(self) -> dict:
        return {e: int(self.delta[self.grid.edge_index(e)]) for e in self.grid.edges}

    def __eq__(self, other) -> bool:
        return (isinstance(other, FlowClass) and self.grid.n == other.grid.n
                and bool(np.array_equal(self.delta, other.delta)))

    def __hash__(self) -> int:
        return hash((self.grid.n, self.delta.tobytes()))

    def _require_same_grid(self, other: "FlowClass") -> None:
        if self.grid.n != other.grid.n:
            raise GridMismatchError("flows live on different grids")

    # -- slack and hive predicates --------------------------------------------

    def slack(self, rho: Rhombus) -> int:
        g = self.grid
        i = rho.index
        d = self.delta
        value = int(g._slack_s1[i] * d[g._slack_e1[i]] + g._slack_s2[i] * d[g._slack_e2[i]])
        assert value == self.slack_alt(rho), "equivalent slack forms diverged"
        return value

    def slack_alt(self, rho: Rhombus) -> int:
        """Equivalent slack form using the other two rhombus sides."""
        g = self.grid
        i = rho.index
        d = self.delta
        return int(g._slack_s3[i] * d[g._slack_e3[i]] + g._slack_s4[i] * d[g._slack_e4[i]])

    def slack_vector(self) -> np.ndarray:
        g = self.grid
        d = self.delta
        return g._slack_s1 * d[g._slack_e1] + g._slack_s2 * d[g._slack_e2]

    def is_hive_flow(self) -> bool:
        return bool((self.slack_vector() >= 0).all()) if self.grid.num_rhombi else True

    def is_flat(self, rho: Rhombus) -> bool:
        return self.slack(rho) == 0

    # -- polytope membership ----------------------------------------------------

    def _border_ok(self, caps: CapacityMap, tight: bool) -> bool:
        g = self.grid
        d = self.delta
        for e_idx, kind in enumerate(g._border_kind):
            if kind == 0:
                continue
            v = int(d[e_idx]) if kind != 3 else -int(d[e_idx])
            b = int(caps.values[e_idx])
            if tight:
                if v != b:
                    return False
            elif not (0 <= v <= b):
                return False
        return True

    def in_B(self, caps: CapacityMap) -> bool:
        """Membership in the polytope of bounded hive flows."""
        return self.is_hive_flow() and self._border_ok(caps, tight=False)

    def in_P(self, caps: CapacityMap) -> bool:
        """Membership in the capacity achieving face: all border bounds tight."""
        return self.is_hive_flow() and self._border_ok(caps, tight=True)

    # -- throughput, norm, arithmetic ---------------------------------------------

    def throughput(self) -> int:
        """Overall throughput: sum over the right+bottom borders, cross-checked
        against minus the left-border sum."""
        g = self.grid
        d = self.delta
        rb = int(d[(g._border_kind == 1) | (g._border_kind == 2)].sum())
        lf = -int(d[g._border_kind == 3].sum())
        if rb != lf:
            raise FlowConsistencyError(f"border sums disagree: {rb} vs {lf}")
        return rb

    def norm(self) -> int:
        return int(np.abs(self.delta).sum())

    def distance(self, other: "FlowClass") -> int:
        self._require_same_grid(other)
        return int(np.abs(other.delta - self.delta).sum())

    def add_scaled(self, other: "FlowClass", s: int = 1) -> "FlowClass":
        self._require_same_grid(other)
        return FlowClass(self.grid, self.delta + s * other.delta, validate=False)

    def __add__(self, other: "FlowClass") -> "FlowClass":
        return self.add_scaled(other, 1)

    def __sub__(self, other: "FlowClass") -> "FlowClass":
        return self.add_scaled(other, -1)

    def __rmul__(self, s: int) -> "FlowClass":
        return FlowClass(self.grid, s * self.delta, validate=False)

    def __repr__(self) -> str:
        return f"FlowClass(n={self.grid.n}, throughput={self.throughput()})"

    # -- support queries ------------------------------------------------------

    def into_triangle(self, e: EdgeId, t: TriangleId) -> int:
        """Throughput through e signed as inflow of the triangle t."""
        v = self[e]
        return v if t.upright else -v

    def supports(self, x) -> bool:
        """Whether a turn or turnedge lies in the support of the reduced
        representative reconstructed from the throughputs."""
        from .grid import Turn, TurnEdge  # local names only
        if isinstance(x, TurnEdge):
            return self.supports(x.tail) and self.supports(x.head)
        t: Turn = x
        return (self.into_triangle(t.in_side, t.triangle) > 0
                and self.into_triangle(t.out_side, t.triangle) < 0)


# -- free-function forms -------------------------------------------------------


def zero_flow(grid: TriangleGrid) -> FlowClass:
    return FlowClass.zero(grid)


def slack(f: FlowClass, rho: Rhombus) -> int:
    return f.slack(rho)


def is_hive_flow(f: FlowClass) -> bool:
    return f.is_hive_flow()


def in_B(f: FlowClass, caps: CapacityMap) -> bool:
    return f.in_B(caps)


def in_P(f: FlowClass, caps: CapacityMap) -> bool:
    return f.in_P(caps)


def overall_throughput(f: FlowClass) -> int:
    return f.throughput()


def norm(f: FlowClass) -> int:
    return f.norm()


def distance(f: FlowClass, g: FlowClass) -> int:
    return f.distance(g)


def add_scaled(f: FlowClass, d: FlowClass, s: int) -> FlowClass:
    return f.add_scaled(d, s)


# -- decomposition into complete paths (test utility) ---------------------------

_S = ("s",)
_T = ("t",)


def _g_edges(f: FlowClass) -> dict:
    """Reduced representative of f as a nonnegative flow on honeycomb edges.

    Vertices are ('w', edge_idx), ('b', tri_idx), ('s',) and ('t',).
    """
    g = f.grid
    out: dict = {}

    def put(u, v, w):
        if w > 0:
            out[(u, v)] = out.get((u, v), 0) + w

    for tri_idx in range(g.num_triangles):
        t = g.triangles[tri_idx]
        b = ("b", tri_idx)
        for e_idx in g._triangle_side_ids(tri_idx):
            inflow = int(f.delta[e_idx]) * (1 if t.upright else -1)
            w = ("w", e_idx)
            put(w, b, max(inflow, 0))
            put(b, w, max(-inflow, 0))
    for e_idx, kind in enumerate(g._border_kind):
        if kind == 0:
            continue
        v = int(f.delta[e_idx])
        w = ("w", e_idx)
        if kind in (1, 2):  # s side; positive delta enters the grid
            put(_S, w, max(v, 0))
            put(w, _S, max(-v, 0))
        else:  # t side; positive outflow -delta leaves towards t
            put(w, _T, max(-v, 0))
            put(_T, w, max(v, 0))
    return out


def decompose(f: FlowClass) -> list:
    """Write f as an integer combination of complete paths of the honeycomb
    graph: a list of (vertex sequence, weight) pairs covering s-t paths,
    t-s paths and cycles, whose weighted sum reproduces every throughput."""
    edges = _g_edges(f)
    succ: dict = {}
    pred: dict = {}
    for (u, v) in edges:
        succ.setdefault(u, []).append(v)
        pred.setdefault(v, []).append(u)
    for adj in (succ, pred):
        for u in adj:
            adj[u].sort(key=repr)

    def first_alive(candidates, fixed, forward):
        for c in candidates:
            key = (fixed, c) if forward else (c, fixed)
            if edges.get(key, 0) > 0:
                return c
        raise FlowConsistencyError("conservation violated during decomposition")

    def extract(seq):
        weight = min(edges[(a, b)] for a, b in zip(seq, seq[1:]))
        for a, b in zip(seq, seq[1:]):
            edges[(a, b)] -= weight
            if edges[(a, b)] == 0:
                del edges[(a, b)]
        parts.append((tuple(seq), weight))

    parts: list = []
    while edges:
        u0, v0 = next(iter(edges))
        chain = [u0, v0]
        pos = {u0: 0, v0: 1}
        cycle = None
        # forward until s/t or a repeated vertex (then a cycle closes)
        while chain[-1] not in (_S, _T):
            nxt = first_alive(succ.get(chain[-1], ()), chain[-1], forward=True)
            if nxt in pos:
                cycle = chain[pos[nxt]:] + [nxt]
                break
            pos[nxt] = len(chain)
            chain.append(nxt)
        if cycle is None:
            # backward from the front until s/t or a repeat
            while chain[0] not in (_S, _T):
                prv = first_alive(pred.get(chain[0], ()), chain[0], forward=False)
                if prv in pos:
                    cycle = [prv] + chain[: pos[prv] + 1]
                    break
                chain.insert(0, prv)
                pos = {v: k for k, v in enumerate(chain)}
        extract(cycle if cycle is not None else chain)
    return parts
