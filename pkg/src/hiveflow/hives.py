"""Hive labellings of the grid vertices and their flow counterparts.

A hive label assigns an integer to every vertex with 0 at the apex; the
coboundary map (differences along the clockwise-upright edge orientation)
identifies labellings with flow classes.  Rhombus slacks become the classic
obtuse-minus-acute corner sums, and the flat rhombi of a hive flow carve the
grid into convex flatspaces.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

import numpy as np

from .errors import FlowConsistencyError
from .flow import FlowClass
from .grid import (SQRT3_2, EdgeId, Rhombus, Side, TriangleGrid, TriangleId,
                   VertexId, _vpos)

__all__ = [
    "HiveLabel", "flow_to_hive", "hive_to_flow", "Flatspace", "FlatspaceSide",
    "flatspaces", "side_throughputs",
]


class HiveLabel:
    """Integer vertex labels with value 0 at the top vertex."""

    __slots__ = ("grid", "values")

    def __init__(self, grid: TriangleGrid, values):
        self.grid = grid
        arr = np.asarray(values, dtype=np.int64).copy()
        if arr.shape != (grid.num_vertices,):
            raise ValueError(f"expected {grid.num_vertices} labels, got {arr.shape}")
        if arr[0] != 0:
            raise ValueError("hive labels must vanish at the top vertex")
        arr.setflags(write=False)
        self.values = arr

    @classmethod
    def from_mapping(cls, grid: TriangleGrid, mapping: Mapping[VertexId, int]) -> "HiveLabel":
        arr = np.zeros(grid.num_vertices, dtype=np.int64)
        for v, x in mapping.items():
            arr[grid.vertex_index(v)] = x
        return cls(grid, arr)

    def __getitem__(self, v: VertexId) -> int:
        return int(self.values[self.grid.vertex_index(v)])

    def __eq__(self, other) -> bool:
        return (isinstance(other, HiveLabel) and self.grid.n == other.grid.n
                and bool(np.array_equal(self.values, other.values)))

    def __hash__(self) -> int:
        return hash((self.grid.n, self.values.tobytes()))

    def slack(self, rho: Rhombus) -> int:
        """Obtuse corner sum minus acute corner sum."""
        o1, o2 = rho.obtuse
        a1, a2 = rho.acute
        return self[o1] + self[o2] - self[a1] - self[a2]

    def is_hive(self) -> bool:
        return all(self.slack(rho) >= 0 for rho in self.grid.rhombi)

    def __repr__(self) -> str:
        return f"HiveLabel(n={self.grid.n})"


def hive_to_flow(h: HiveLabel) -> FlowClass:
    """Coboundary: delta(k) = h(head) - h(tail); closedness is automatic."""
    g = h.grid
    delta = h.values[g._edge_head] - h.values[g._edge_tail]
    return FlowClass(g, delta, validate=False)


def flow_to_hive(f: FlowClass) -> HiveLabel:
    """Accumulate throughputs along leftmost-descent paths from the apex.

    Any path gives the same labels by closedness, which is validated first.
    """
    f.check_closedness()
    g = f.grid
    vals = np.zeros(g.num_vertices, dtype=np.int64)
    vi = g.vertex_index
    for m in range(g.n):
        # descend the left edge of U(m, i): h(x(m+1,i)) = h(x(m,i)) - delta(left)
        for i in range(m + 1):
            left = f[EdgeId(m, i, Side.LEFT)]
            vals[vi(VertexId(m + 1, i))] = vals[vi(VertexId(m, i))] - left
        right = f[EdgeId(m, m, Side.RIGHT)]
        vals[vi(VertexId(m + 1, m + 1))] = vals[vi(VertexId(m, m))] + right
    return HiveLabel(g, vals)


# -- flatspaces ---------------------------------------------------------------


@dataclass(frozen=True)
class FlatspaceSide:
    """One maximal straight border segment of a flatspace.

    ``edges`` lists the grid edges of the side in clockwise order around the
    flatspace, so the entrance edge comes first and the exit edge last.
    """

    edges: tuple

    @property
    def entrance(self) -> EdgeId:
        return self.edges[0]

    @property
    def exit(self) -> EdgeId:
        return self.edges[-1]


@dataclass(frozen=True)
class Flatspace:
    """A connected union of triangles glued along flat rhombi."""

    triangles: frozenset
    shape: str  # triangle | parallelogram | trapezoid | pentagon | hexagon
    sides: tuple  # FlatspaceSide, clockwise around the boundary

    def __contains__(self, t: TriangleId) -> bool:
        return t in self.triangles


_SHAPES = {3: "triangle", 5: "pentagon", 6: "hexagon"}


def _boundary_walk(grid: TriangleGrid, tris: set) -> list:
    """Clockwise vertex cycle around a convex union of triangles."""
    # boundary edges have exactly one incident triangle inside the set
    tri_idx = {grid.triangle_index(t) for t in tris}
    bedges = []
    for t in tris:
        for e in grid.triangle_sides(t):
            others = [x for x in grid.edge_triangles(e) if grid.triangle_index(x) in tri_idx]
            if len(others) == 1:
                bedges.append(e)
    # orient each boundary edge so the interior lies to its left when walking
    # clockwise (y grows upward, interior below-right of the walk direction)
    succ = {}
    for e in bedges:
        a, b = grid.edge_endpoints(e)
        inner = next(t for t in grid.edge_triangles(e) if grid.triangle_index(t) in tri_idx)
        cx = sum(_vpos(v)[0] for v in grid.triangle_vertices(inner)) / 3.0
        cy = sum(_vpos(v)[1] for v in grid.triangle_vertices(inner)) / 3.0
        pa, pb = _vpos(a), _vpos(b)
        # cross((b-a), (centroid-a)) > 0 means the interior is left of a->b:
        # walking a->b then keeps the region on the left = counterclockwise;
        # we want clockwise, so pick the direction with the interior on the right
        cross = (pb[0] - pa[0]) * (cy - pa[1]) - (pb[1] - pa[1]) * (cx - pa[0])
        if cross > 0:
            succ[grid.vertex_index(b)] = (b, a, e)
        else:
            succ[grid.vertex_index(a)] = (a, b, e)
    start = min(succ)
    walk = []
    cur = start
    for _ in range(len(succ)):
        a, b, e = succ[cur]
        walk.append((a, b, e))
        cur = grid.vertex_index(b)
    assert cur == start, "boundary walk did not close"
    return walk


def _classify(corner_is_acute: list) -> str:
    k = len(corner_is_acute)
    if k in _SHAPES:
        return _SHAPES[k]
    # quadrilateral: acute corners adjacent -> trapezoid, opposite -> parallelogram
    a = [i for i, acute in enumerate(corner_is_acute) if acute]
    assert k == 4 and len(a) == 2
    return "trapezoid" if (a[1] - a[0]) in (1, 3) else "parallelogram"


def flatspaces(f: FlowClass) -> list:
    """Partition the grid triangles into the flatspaces of a hive flow."""
    if not f.is_hive_flow():
        raise FlowConsistencyError("flatspaces are defined for hive flows only")
    g = f.grid
    sigma = f.slack_vector()
    parent = list(range(g.num_triangles))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for rho in g.rhombi:
        if sigma[rho.index] == 0:
            a = find(g.triangle_index(rho.triangles[0]))
            b = find(g.triangle_index(rho.triangles[1]))
            if a != b:
                parent[max(a, b)] = min(a, b)

    groups: dict = {}
    for idx in range(g.num_triangles):
        groups.setdefault(find(idx), []).append(idx)

    spaces = []
    for root in sorted(groups):
        tris = {g.triangles[i] for i in groups[root]}
        walk = _boundary_walk(g, tris)
        # split the walk into maximal straight runs; corners are turning points
        dirs = []
        for a, b, _e in walk:
            pa, pb = _vpos(a), _vpos(b)
            dirs.append((round(2 * (pb[0] - pa[0])), round(2 * (pb[1] - pa[1]) / SQRT3_2)))
        k = len(walk)
        corners = [i for i in range(k) if dirs[i] != dirs[i - 1]]
        sides = []
        acute_flags = []
        for ci, start in enumerate(corners):
            end = corners[(ci + 1) % len(corners)]
            idxs = [(start + j) % k for j in range((end - start) % k or k)]
            sides.append(FlatspaceSide(edges=tuple(walk[i][2] for i in idxs)))
            # angle at this corner between incoming dir and outgoing dir
            din = dirs[start - 1]
            dout = dirs[start]
            dot = din[0] * dout[0] + 3 * din[1] * dout[1]
            acute_flags.append(dot < 0)  # 120-degree turn of the path = acute corner
        spaces.append(Flatspace(triangles=frozenset(tris),
                                shape=_classify(acute_flags), sides=tuple(sides)))
    return spaces


def side_throughputs(f: FlowClass, space: Flatspace, side: FlatspaceSide, d: Optional[FlowClass] = None) -> list:
    """Throughputs into the flatspace through each edge of one side, clockwise.

    With d omitted the defining flow's own throughputs are returned (all
    equal along a side); passing a direction d gives d's throughputs.
    """
    flow = d if d is not None else f
    g = flow.grid
    out = []
    for e in side.edges:
        inner = next(t for t in g.edge_triangles(e) if t in space.triangles)
        out.append(flow.into_triangle(e, inner))
    return out
