"""The triangular grid: vertices, edges, hive triangles, rhombi and capacities.

Everything downstream (flows, hives, the turn digraph) is indexed against one
immutable ``TriangleGrid``.  The grid fixes the deterministic iteration order
used for BFS tie-breaking: row-major, upright before downright.

Conventions baked in here:

* vertices x(m, i) sit in row m from the top, offset i from the left;
* every edge is keyed by the unique upright triangle having it as a side,
  and is oriented so that upright triangles are traversed clockwise
  (tail -> head); the throughput through an edge is counted positively when
  the flow enters the upright triangle;
* every interior edge is the diagonal of exactly one rhombus.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum
from functools import lru_cache
from typing import Iterable, Iterator, NamedTuple, Sequence, Union

import numpy as np

from .errors import InvalidInstanceError

SQRT3_2 = 0.8660254037844386

# int64 slack sums must not overflow inside the kernels
MAX_PART_BOUND = 1 << 60


class Side(IntEnum):
    LEFT = 0
    RIGHT = 1
    BOTTOM = 2

    @property
    def letter(self) -> str:
        return "LRB"[self]


class VertexId(NamedTuple):
    m: int  # row from the top, 0..n
    i: int  # offset in the row, 0..m


class TriangleId(NamedTuple):
    row: int
    col: int
    upright: bool


class EdgeId(NamedTuple):
    """An edge of the grid, keyed by its unique upright triangle and side."""

    row: int
    col: int
    side: Side

    @property
    def key(self) -> str:
        return f"U:{self.row},{self.col}:{self.side.letter}"

    @classmethod
    def from_key(cls, key: str) -> "EdgeId":
        tag, rc, letter = key.split(":")
        if tag != "U" or letter not in "LRB":
            raise ValueError(f"bad edge key {key!r}")
        r, c = rc.split(",")
        return cls(int(r), int(c), Side("LRB".index(letter)))


class Turn(NamedTuple):
    """A length-2 path in the honeycomb graph through one triangle."""

    triangle: TriangleId
    in_side: EdgeId
    out_side: EdgeId


class TurnEdge(NamedTuple):
    """An ordered pair of turns concatenable to a length-4 path."""

    tail: Turn
    head: Turn


Contribution = Union[Turn, TurnEdge]


class SlackContributions(NamedTuple):
    plus: tuple
    minus: tuple
    zero: tuple


@dataclass(frozen=True)
class Rhombus:
    """Union of an upright and a downright triangle sharing the diagonal."""

    index: int
    diag: EdgeId
    acute: tuple  # (acute corner in the upright half, acute corner in the downright half)
    obtuse: tuple  # the two endpoints of the diagonal
    triangles: tuple  # (upright TriangleId, downright TriangleId)


class Partition(tuple):
    """Weakly decreasing tuple of nonnegative integers.

    Trailing zeros are kept as given; they only matter for inferring the
    grid size n.
    """

    def __new__(cls, parts: Iterable[int] = ()) -> "Partition":
        vals = tuple(int(x) for x in parts)
        for a, b in zip(vals, vals[1:]):
            if a < b:
                raise InvalidInstanceError(f"parts must be weakly decreasing, got {vals}")
        if vals and vals[-1] < 0:
            raise InvalidInstanceError(f"parts must be nonnegative, got {vals}")
        return super().__new__(cls, vals)

    @property
    def weight(self) -> int:
        return sum(self)

    @property
    def nonzero_length(self) -> int:
        return sum(1 for x in self if x)

    def padded(self, n: int) -> "Partition":
        if len(self) > n:
            if any(self[n:]):
                raise InvalidInstanceError(f"{tuple(self)} does not fit in {n} rows")
            return Partition(self[:n])
        return Partition(self + (0,) * (n - len(self)))

    def stretched(self, factor: int) -> "Partition":
        return Partition(x * factor for x in self)


def _vpos(v: VertexId) -> tuple:
    """Planar position with the apex on top (y grows upward)."""
    return (v.i - v.m / 2.0, -v.m * SQRT3_2)


def _edge_mid(a: VertexId, b: VertexId) -> tuple:
    pa, pb = _vpos(a), _vpos(b)
    return ((pa[0] + pb[0]) / 2.0, (pa[1] + pb[1]) / 2.0)


def _is_clockwise(corner: VertexId, from_mid: tuple, to_mid: tuple) -> bool:
    c = _vpos(corner)
    ux, uy = from_mid[0] - c[0], from_mid[1] - c[1]
    vx, vy = to_mid[0] - c[0], to_mid[1] - c[1]
    return ux * vy - uy * vx < 0


# per-triangle turn slots, ordered (in, out) lexicographically over side positions
_TURN_SLOTS = ((0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1))


class TriangleGrid:
    """Immutable triangular grid of parameter n with all derived index tables."""

    def __init__(self, n: int):
        if n < 1:
            raise InvalidInstanceError("grid parameter n must be >= 1")
        self.n = n
        self.num_vertices = (n + 1) * (n + 2) // 2
        self.num_edges = 3 * n * (n + 1) // 2
        self.num_triangles = n * n
        self.num_rhombi = 3 * n * (n - 1) // 2
        self.num_turns = 6 * n * n

        self._build_vertices()
        self._build_triangles()
        self._build_edges()
        self._build_rhombi()
        self._build_turn_tables()
        self._cache: dict = {}

    # -- vertices ----------------------------------------------------------

    def _build_vertices(self) -> None:
        self.vertices: list = []
        for m in range(self.n + 1):
            for i in range(m + 1):
                self.vertices.append(VertexId(m, i))

    def vertex_index(self, v: VertexId) -> int:
        return v.m * (v.m + 1) // 2 + v.i

    @property
    def top_vertex(self) -> VertexId:
        return VertexId(0, 0)

    # -- triangles ---------------------------------------------------------

    def _build_triangles(self) -> None:
        # row-major, alternating left to right: U(r,0), D(r,0), ..., U(r,r),
        # so U(r,c) sits at r^2 + 2c and D(r,c) at r^2 + 2c + 1
        self.triangles: list = [None] * self.num_triangles
        for r in range(self.n):
            for c in range(r + 1):
                self.triangles[r * r + 2 * c] = TriangleId(r, c, True)
            for c in range(r):
                self.triangles[r * r + 2 * c + 1] = TriangleId(r, c, False)

    def triangle_index(self, t: TriangleId) -> int:
        return t.row * t.row + 2 * t.col + (0 if t.upright else 1)

    def _upright_index(self, r: int, c: int) -> int:
        return r * (r + 1) // 2 + c

    def triangle_vertices(self, t: TriangleId) -> tuple:
        r, c = t.row, t.col
        if t.upright:
            return (VertexId(r, c), VertexId(r + 1, c), VertexId(r + 1, c + 1))
        return (VertexId(r, c), VertexId(r, c + 1), VertexId(r + 1, c + 1))

    # -- edges -------------------------------------------------------------

    def _build_edges(self) -> None:
        n = self.n
        self.edges: list = []
        # orientation: upright triangles clockwise, so
        #   left:   x(r+1,c)   -> x(r,c)
        #   right:  x(r,c)     -> x(r+1,c+1)
        #   bottom: x(r+1,c+1) -> x(r+1,c)
        self._edge_tail = np.empty(self.num_edges, dtype=np.int32)
        self._edge_head = np.empty(self.num_edges, dtype=np.int32)
        self._edge_tris = np.full((self.num_edges, 2), -1, dtype=np.int32)
        self._by_endpoints: dict = {}
        vv = self.vertex_index
        for r in range(n):
            for c in range(r + 1):
                u = self._upright_index(r, c)
                for side in Side:
                    self.edges.append(EdgeId(r, c, side))
                ends = {
                    Side.LEFT: (VertexId(r + 1, c), VertexId(r, c)),
                    Side.RIGHT: (VertexId(r, c), VertexId(r + 1, c + 1)),
                    Side.BOTTOM: (VertexId(r + 1, c + 1), VertexId(r + 1, c)),
                }
                for side, (tail, head) in ends.items():
                    e = 3 * u + side
                    self._edge_tail[e] = vv(tail)
                    self._edge_head[e] = vv(head)
                    self._by_endpoints[frozenset((tail, head))] = e
                    self._edge_tris[e, 0] = self.triangle_index(TriangleId(r, c, True))
        # second incident triangle (downright), if any
        for r in range(n):
            for c in range(r):
                d = self.triangle_index(TriangleId(r, c, False))
                for e in self._downright_side_ids(r, c):
                    self._edge_tris[e, 1] = d

        # border bookkeeping: (border_char, index i in 1..n) per border edge
        self.border_of: dict = {}
        for r in range(n):
            self.border_of[self.edge_index(EdgeId(r, r, Side.RIGHT))] = ("R", r + 1)
            self.border_of[self.edge_index(EdgeId(r, 0, Side.LEFT))] = ("L", r + 1)
        for c in range(n):
            self.border_of[self.edge_index(EdgeId(n - 1, c, Side.BOTTOM))] = ("B", n - c)

        self._border_kind = np.zeros(self.num_edges, dtype=np.int8)  # 0 interior, 1 R, 2 B, 3 L
        for e, (ch, _i) in self.border_of.items():
            self._border_kind[e] = {"R": 1, "B": 2, "L": 3}[ch]

    def _downright_side_ids(self, r: int, c: int) -> tuple:
        """Edges of D(r,c) in canonical order (top, north-east, south-west)."""
        top = 3 * self._upright_index(r - 1, c) + Side.BOTTOM
        ne = 3 * self._upright_index(r, c + 1) + Side.LEFT
        sw = 3 * self._upright_index(r, c) + Side.RIGHT
        return (top, ne, sw)

    def edge_index(self, e: EdgeId) -> int:
        return 3 * self._upright_index(e.row, e.col) + e.side

    def edge_endpoints(self, e: EdgeId) -> tuple:
        """(tail, head) under the clockwise-upright orientation."""
        idx = self.edge_index(e)
        return (self.vertices[self._edge_tail[idx]], self.vertices[self._edge_head[idx]])

    def edge_by_endpoints(self, a: VertexId, b: VertexId) -> EdgeId:
        return self.edges[self._by_endpoints[frozenset((a, b))]]

    def edge_triangles(self, e: EdgeId) -> tuple:
        """The incident triangles (upright first; border edges have one)."""
        idx = self.edge_index(e)
        a, b = self._edge_tris[idx]
        if b < 0:
            return (self.triangles[a],)
        return (self.triangles[a], self.triangles[b])

    def is_border(self, e: EdgeId) -> bool:
        return self.edge_index(e) in self.border_of

    def border_edges(self, which: str) -> list:
        """Border edges of one side, ordered by the capacity index (1..n)."""
        found = [(i, e) for e, (ch, i) in
                 ((self.edges[k], v) for k, v in self.border_of.items()) if ch == which]
        return [e for _i, e in sorted(found)]

    def triangle_sides(self, t: TriangleId) -> tuple:
        """The triangle's edges in canonical order (L,R,B / top,NE,SW)."""
        if t.upright:
            u = self._upright_index(t.row, t.col)
            return tuple(self.edges[3 * u + s] for s in Side)
        return tuple(self.edges[e] for e in self._downright_side_ids(t.row, t.col))

    def _triangle_side_ids(self, tri_idx: int) -> tuple:
        t = self.triangles[tri_idx]
        if t.upright:
            u = self._upright_index(t.row, t.col)
            return (3 * u, 3 * u + 1, 3 * u + 2)
        return self._downright_side_ids(t.row, t.col)

    # -- rhombi and slack contributions --------------------------------------

    def _build_rhombi(self) -> None:
        n = self.n
        self.rhombi: list = []
        self._rho_of_diag = np.full(self.num_edges, -1, dtype=np.int32)
        # slack formula per rhombus: sigma = s1*delta[e1] + s2*delta[e2],
        # with an equivalent alternative (e3,s3,e4,s4) kept for cross-checks
        ne1, ns1, ne2, ns2 = [], [], [], []
        ne3, ns3, ne4, ns4 = [], [], [], []
        self._psi: list = []
        self._antipodal: list = []
        self._rho_parts: list = []  # internals per rhombus for turn-table construction

        specs = []
        for r in range(n):
            for c in range(r + 1):
                if r <= n - 2:  # horizontal diagonal below U(r,c)
                    specs.append(
                        (EdgeId(r, c, Side.BOTTOM), TriangleId(r, c, True),
                         TriangleId(r + 1, c, False),
                         VertexId(r, c), VertexId(r + 2, c + 1),
                         VertexId(r + 1, c), VertexId(r + 1, c + 1))
                    )
                if c >= 1:  # diagonal along the left side of U(r,c)
                    specs.append(
                        (EdgeId(r, c, Side.LEFT), TriangleId(r, c, True),
                         TriangleId(r, c - 1, False),
                         VertexId(r + 1, c + 1), VertexId(r, c - 1),
                         VertexId(r, c), VertexId(r + 1, c))
                    )
                if c < r:  # diagonal along the right side of U(r,c)
                    specs.append(
                        (EdgeId(r, c, Side.RIGHT), TriangleId(r, c, True),
                         TriangleId(r, c, False),
                         VertexId(r + 1, c), VertexId(r, c + 1),
                         VertexId(r, c), VertexId(r + 1, c + 1))
                    )

        # deterministic order: by diagonal edge index
        specs.sort(key=lambda s: self.edge_index(s[0]))

        for idx, (diag, tri_a, tri_b, a_corner, b_corner, d1, d2) in enumerate(specs):
            # orient the obtuse corners so that the turn (a2 -> a1) around the
            # acute corner of the upright half is clockwise
            ea_d1 = self.edge_by_endpoints(a_corner, d1)
            ea_d2 = self.edge_by_endpoints(a_corner, d2)
            if _is_clockwise(a_corner, _edge_mid(a_corner, d2), _edge_mid(a_corner, d1)):
                o1, o2 = d1, d2
            else:
                o1, o2 = d2, d1
            a1 = self.edge_by_endpoints(a_corner, o1)
            a2 = self.edge_by_endpoints(a_corner, o2)
            b1 = self.edge_by_endpoints(b_corner, o1)
            b2 = self.edge_by_endpoints(b_corner, o2)
            assert _is_clockwise(b_corner, _edge_mid(b_corner, o1), _edge_mid(b_corner, o2))

            def sgn(edge: EdgeId, positive_head: VertexId) -> int:
                return 1 if self.edge_endpoints(edge)[1] == positive_head else -1

            ne1.append(self.edge_index(a1)); ns1.append(sgn(a1, o1))
            ne2.append(self.edge_index(b2)); ns2.append(sgn(b2, o2))
            ne3.append(self.edge_index(a2)); ns3.append(sgn(a2, o2))
            ne4.append(self.edge_index(b1)); ns4.append(sgn(b1, o1))

            self.rhombi.append(
                Rhombus(index=idx, diag=diag, acute=(a_corner, b_corner),
                        obtuse=(o1, o2), triangles=(tri_a, tri_b))
            )
            self._rho_of_diag[self.edge_index(diag)] = idx
            self._rho_parts.append((tri_a, tri_b, a1, a2, b1, b2, diag))

        self._slack_e1 = np.array(ne1, dtype=np.int32)
        self._slack_s1 = np.array(ns1, dtype=np.int64)
        self._slack_e2 = np.array(ne2, dtype=np.int32)
        self._slack_s2 = np.array(ns2, dtype=np.int64)
        self._slack_e3 = np.array(ne3, dtype=np.int32)
        self._slack_s3 = np.array(ns3, dtype=np.int64)
        self._slack_e4 = np.array(ne4, dtype=np.int32)
        self._slack_s4 = np.array(ns4, dtype=np.int64)

    def rhombus_of_diagonal(self, e: EdgeId) -> Rhombus:
        idx = self._rho_of_diag[self.edge_index(e)]
        if idx < 0:
            raise ValueError(f"{e} is a border edge, not a diagonal")
        return self.rhombi[idx]

    def overlapping(self, r1: Rhombus, r2: Rhombus) -> bool:
        """Two distinct rhombi overlap when they share a hive triangle."""
        return r1.index != r2.index and bool(set(r1.triangles) & set(r2.triangles))

    # -- turns ---------------------------------------------------------------

    def _build_turn_tables(self) -> None:
        # public Psi tables and the antipodal involution need Turn objects;
        # kernels use the parallel integer tables built in residual.py
        self._psi = []
        self._antipodal = []
        for (tri_a, tri_b, a1, a2, b1, b2, diag) in self._rho_parts:
            T = Turn
            plus = (
                T(tri_a, a2, a1),
                T(tri_b, b1, b2),
                TurnEdge(T(tri_a, a2, diag), T(tri_b, diag, b2)),
                TurnEdge(T(tri_b, b1, diag), T(tri_a, diag, a1)),
            )
            minus = (
                T(tri_a, a1, a2),
                T(tri_b, b2, b1),
                TurnEdge(T(tri_a, a1, diag), T(tri_b, diag, b1)),
                TurnEdge(T(tri_b, b2, diag), T(tri_a, diag, a2)),
            )
            zero = (
                TurnEdge(T(tri_a, a1, diag), T(tri_b, diag, b2)),
                TurnEdge(T(tri_a, a2, diag), T(tri_b, diag, b1)),
                TurnEdge(T(tri_b, b1, diag), T(tri_a, diag, a2)),
                TurnEdge(T(tri_b, b2, diag), T(tri_a, diag, a1)),
            )
            self._psi.append(SlackContributions(plus, minus, zero))

            # antipodal = reverse, then rotate by 180 degrees about the center
            rot_tri = {tri_a: tri_b, tri_b: tri_a}
            rot_edge = {a1: b2, b2: a1, a2: b1, b1: a2, diag: diag}

            def rot_turn(t: Turn) -> Turn:
                return Turn(rot_tri[t.triangle], rot_edge[t.in_side], rot_edge[t.out_side])

            def antip(x: Contribution) -> Contribution:
                if isinstance(x, TurnEdge):
                    rev = TurnEdge(
                        Turn(x.head.triangle, x.head.out_side, x.head.in_side),
                        Turn(x.tail.triangle, x.tail.out_side, x.tail.in_side),
                    )
                    return TurnEdge(rot_turn(rev.tail), rot_turn(rev.head))
                return rot_turn(Turn(x.triangle, x.out_side, x.in_side))

            self._antipodal.append({x: antip(x) for x in plus + minus})

    def slack_contributions(self, rho: Rhombus) -> SlackContributions:
        """The positive/negative/neutral slack contributions of a rhombus."""
        return self._psi[rho.index]

    def antipodal(self, rho: Rhombus, x: Contribution) -> Contribution:
        """Reverse-and-rotate involution pairing Psi+ with Psi- elements."""
        return self._antipodal[rho.index][x]

    def turn_by_id(self, turn_id: int) -> Turn:
        tri_idx, slot = divmod(turn_id, 6)
        sides = self._triangle_side_ids(tri_idx)
        i, o = _TURN_SLOTS[slot]
        return Turn(self.triangles[tri_idx], self.edges[sides[i]], self.edges[sides[o]])

    def turn_id(self, t: Turn) -> int:
        tri_idx = self.triangle_index(t.triangle)
        sides = self._triangle_side_ids(tri_idx)
        i = sides.index(self.edge_index(t.in_side))
        o = sides.index(self.edge_index(t.out_side))
        return tri_idx * 6 + _TURN_SLOTS.index((i, o))

    def turns(self) -> Iterator[Turn]:
        for tid in range(self.num_turns):
            yield self.turn_by_id(tid)

    # -- hexagons (for the trapezoid-pair slack identity) ---------------------

    def hexagons(self) -> list:
        """For each interior vertex: the six surrounding rhombi in cyclic order.

        The diagonals of the six rhombi are the six edges incident to the
        vertex; adjacent pairs form trapezoids of the hexagon.
        """
        out = []
        for m in range(1, self.n):
            for i in range(1, m):
                v = VertexId(m, i)
                ring = (VertexId(m - 1, i - 1), VertexId(m - 1, i), VertexId(m, i + 1),
                        VertexId(m + 1, i + 1), VertexId(m + 1, i), VertexId(m, i - 1))
                rhos = tuple(self.rhombus_of_diagonal(self.edge_by_endpoints(v, u))
                             for u in ring)
                out.append((v, rhos))
        return out

    def __repr__(self) -> str:
        return f"TriangleGrid(n={self.n})"


@lru_cache(maxsize=32)
def new_grid(n: int) -> TriangleGrid:
    """Build (and cache) the triangular grid of parameter n."""
    return TriangleGrid(n)


def slack_contribution_tables(grid: TriangleGrid) -> dict:
    """The full per-rhombus table of positive/negative/neutral contributions."""
    return {rho: grid.slack_contributions(rho) for rho in grid.rhombi}


# -- border capacities --------------------------------------------------------


@dataclass(frozen=True)
class CapacityMap:
    """Throughput capacities b(k) on the 3n border edges."""

    grid: TriangleGrid
    lam: Partition
    mu: Partition
    nu: Partition
    values: np.ndarray = field(repr=False)  # -1 on interior edges

    def __getitem__(self, e: EdgeId) -> int:
        idx = self.grid.edge_index(e)
        v = int(self.values[idx])
        if v < 0:
            raise KeyError(f"{e} is not a border edge")
        return v

    def __contains__(self, e: EdgeId) -> bool:
        return self.grid.is_border(e)

    def items(self) -> Iterator[tuple]:
        for e in self.grid.edges:
            if self.grid.is_border(e):
                yield e, self[e]

    @property
    def target(self) -> int:
        return self.nu.weight


def common_length(lam: Sequence[int], mu: Sequence[int], nu: Sequence[int]) -> int:
    """Grid size for a triple: the maximum of the three lengths (at least 1)."""
    return max(1, len(lam), len(mu), len(nu))


def border_capacities(grid: TriangleGrid, lam, mu, nu) -> CapacityMap:
    """Assign b(k): lambda_i on the right border (top to bottom), mu_i on the
    bottom border (right to left), nu_i on the left border (top to bottom)."""
    n = grid.n
    lam, mu, nu = Partition(lam).padded(n), Partition(mu).padded(n), Partition(nu).padded(n)
    if nu.weight != lam.weight + mu.weight:
        raise InvalidInstanceError(
            f"|nu| = {nu.weight} != {lam.weight} + {mu.weight} = |lambda| + |mu|"
        )
    bound = MAX_PART_BOUND // max(n, 1)
    if nu.weight > bound or any(p > bound for p in (*lam, *mu, *nu)):
        raise InvalidInstanceError("parts too large for exact 64-bit slack arithmetic")
    values = np.full(grid.num_edges, -1, dtype=np.int64)
    for e, (which, i) in ((grid.edges[k], v) for k, v in grid.border_of.items()):
        part = {"R": lam, "B": mu, "L": nu}[which]
        values[grid.edge_index(e)] = part[i - 1]
    values.setflags(write=False)
    return CapacityMap(grid=grid, lam=lam, mu=mu, nu=nu, values=values)
