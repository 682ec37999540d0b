"""The auxiliary digraph of turns, its residual restrictions and BFS search.

Vertices are the 6n^2 turns plus the source s (gating the right and bottom
borders) and the target t (gating the left border).  Concatenable turn pairs
form the edges inside the grid; the four gate edges crossing a border edge
open and close together depending on the current flow's border headroom.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Optional, Sequence, Union

import numpy as np

from . import _kernels
from .errors import GridMismatchError, InvalidInstanceError
from .flow import FlowClass
from .grid import CapacityMap, Rhombus, TriangleGrid, Turn, TurnEdge

__all__ = [
    "ResidualDigraph", "TurnPath", "build_R", "restrict_to_f", "restrict_scaled",
    "shortest_st_turnpath", "project", "turnpath_slack",
]

S_VERTEX = "s"
T_VERTEX = "t"


class _TurnGraph:
    """Static integer tables of the full turn digraph of one grid."""

    def __init__(self, grid: TriangleGrid):
        n = grid.n
        nt = grid.num_turns
        self.grid = grid
        in_edge = np.empty(nt, dtype=np.int32)
        out_edge = np.empty(nt, dtype=np.int32)
        upright = np.empty(nt, dtype=np.int8)
        adj = np.full((nt, 2), -1, dtype=np.int32)
        gate_kind = np.zeros(nt, dtype=np.int8)  # 1: out side right/bottom, 2: left

        slots = ((0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1))
        side_ids = [grid._triangle_side_ids(i) for i in range(grid.num_triangles)]
        tri_of_edge = grid._edge_tris

        for tri in range(grid.num_triangles):
            up = grid.triangles[tri].upright
            sides = side_ids[tri]
            for slot, (i, o) in enumerate(slots):
                t = tri * 6 + slot
                in_edge[t] = sides[i]
                out_edge[t] = sides[o]
                upright[t] = 1 if up else 0

        for t in range(nt):
            k = out_edge[t]
            tri = t // 6
            a, b = tri_of_edge[k]
            other = b if a == tri else a
            if other < 0:
                gate_kind[t] = 1 if grid._border_kind[k] in (1, 2) else 2
                continue
            targets = []
            osides = side_ids[other]
            pos = osides.index(k)
            for o in range(3):
                if o == pos:
                    continue
                oslot = slots.index((pos, o))
                targets.append(other * 6 + oslot)
            adj[t, 0], adj[t, 1] = targets

        self.in_edge = in_edge
        self.out_edge = out_edge
        self.upright = upright
        self.adj = adj
        self.gate_kind = gate_kind
        # source adjacency: turns starting at the right or bottom border, in id order
        kinds = grid._border_kind[in_edge]
        self.s_turns = np.flatnonzero((kinds == 1) | (kinds == 2)).astype(np.int32)
        self.t_turns = np.flatnonzero(kinds == 3).astype(np.int32)

        # Psi_- deletion tables: per rhombus two turnvertices and two turnedges
        nr = grid.num_rhombi
        self.minus_turns = np.empty((nr, 2), dtype=np.int32)
        self.minus_src = np.empty((nr, 2), dtype=np.int32)
        self.minus_slot = np.empty((nr, 2), dtype=np.int8)
        for rho in grid.rhombi:
            sc = grid.slack_contributions(rho)
            tv = [x for x in sc.minus if isinstance(x, Turn)]
            te = [x for x in sc.minus if isinstance(x, TurnEdge)]
            self.minus_turns[rho.index] = [grid.turn_id(x) for x in tv]
            for j, edge in enumerate(te):
                u = grid.turn_id(edge.tail)
                v = grid.turn_id(edge.head)
                slot = 0 if adj[u, 0] == v else 1
                assert adj[u, slot] == v
                self.minus_src[rho.index, j] = u
                self.minus_slot[rho.index, j] = slot

        # CSR map edge -> rhombi whose slack formula reads it (for incremental
        # slack maintenance in the phase kernels)
        both_e = np.concatenate([grid._slack_e1, grid._slack_e2])
        both_r = np.concatenate([np.arange(nr, dtype=np.int32)] * 2)
        order = np.argsort(both_e, kind="stable")
        counts = np.bincount(both_e, minlength=grid.num_edges)
        self.edge_rho_indptr = np.zeros(grid.num_edges + 1, dtype=np.int32)
        np.cumsum(counts, out=self.edge_rho_indptr[1:])
        self.edge_rho_indices = both_r[order].astype(np.int32)

        self.adj_list = None  # lazily built plain-list mirror for the pure kernel


def _turn_graph(grid: TriangleGrid) -> _TurnGraph:
    tg = grid._cache.get("turn_graph")
    if tg is None:
        tg = _TurnGraph(grid)
        grid._cache["turn_graph"] = tg
    return tg


@dataclass(frozen=True)
class TurnPath:
    """A path or cycle in the turn digraph, stored as its turn ids."""

    grid: TriangleGrid
    kind: str  # "s-t", "t-s" or "cycle"
    turn_ids: tuple

    def __len__(self) -> int:
        return len(self.turn_ids)

    @property
    def turns(self) -> tuple:
        return tuple(self.grid.turn_by_id(t) for t in self.turn_ids)

    def uses_turn(self, t: Turn) -> bool:
        return self.grid.turn_id(t) in set(self.turn_ids)

    def turnedges(self) -> set:
        pairs = set(zip(self.turn_ids, self.turn_ids[1:]))
        if self.kind == "cycle" and len(self.turn_ids) > 1:
            pairs.add((self.turn_ids[-1], self.turn_ids[0]))
        return pairs


class ResidualDigraph:
    """The turn digraph with flow-dependent deletions applied as masks."""

    def __init__(self, grid: TriangleGrid, mode: str,
                 flow: Optional[FlowClass] = None,
                 caps: Optional[CapacityMap] = None,
                 step: int = 0):
        self.grid = grid
        self.mode = mode  # "R", "R_f" or "R_f^l"
        self.flow = flow
        self.caps = caps
        self.step = step  # the augmentation quantum 2^l used for the gates
        tg = _turn_graph(grid)
        self._tg = tg
        nt = grid.num_turns
        self.turn_alive = np.ones(nt, dtype=np.uint8)
        self.slot_alive = np.ones((nt, 2), dtype=np.uint8)
        self.gate_open = np.ones(grid.num_edges, dtype=np.uint8)
        if flow is not None:
            sigma = flow.slack_vector()
            _kernels.impl.build_masks(
                sigma, tg.minus_turns, tg.minus_src, tg.minus_slot,
                self.turn_alive, self.slot_alive)
            kinds = grid._border_kind
            d = flow.delta
            b = caps.values
            inward = np.where(kinds == 3, -d, d)
            border = kinds != 0
            self.gate_open[:] = 0
            self.gate_open[border] = (inward[border] + step <= b[border])

    # -- structural queries (tests and diagnostics) ---------------------------

    def turn_is_vertex(self, turn_id: int) -> bool:
        return bool(self.turn_alive[turn_id])

    def has_turnedge(self, u: int, v: int) -> bool:
        tg = self._tg
        for slot in (0, 1):
            if tg.adj[u, slot] == v:
                return bool(self.turn_alive[u] and self.turn_alive[v]
                            and self.slot_alive[u, slot])
        return False

    def out_neighbors(self, u) -> list:
        """Successors of a vertex (turn id, or the markers 's'/'t')."""
        tg = self._tg
        if u == S_VERTEX:
            return [int(v) for v in tg.s_turns
                    if self.turn_alive[v] and self.gate_open[tg.in_edge[v]]]
        if u == T_VERTEX:
            return [int(v) for v in tg.t_turns
                    if self.turn_alive[v] and self.gate_open[tg.in_edge[v]]]
        out = []
        if not self.turn_alive[u]:
            return out
        for slot in (0, 1):
            v = int(tg.adj[u, slot])
            if v >= 0 and self.slot_alive[u, slot] and self.turn_alive[v]:
                out.append(v)
        k = tg.gate_kind[u]
        if k and self.gate_open[tg.out_edge[u]]:
            out.append(S_VERTEX if k == 1 else T_VERTEX)
        return out

    def edges(self) -> Iterator[tuple]:
        """Every edge of the (restricted) digraph, gates included."""
        for v in self.out_neighbors(S_VERTEX):
            yield (S_VERTEX, v)
        for v in self.out_neighbors(T_VERTEX):
            yield (T_VERTEX, v)
        for u in range(self.grid.num_turns):
            for v in self.out_neighbors(u):
                yield (u, v)

    # -- search ----------------------------------------------------------------

    def shortest_st_turnpath(self) -> Optional[TurnPath]:
        """Minimum-edge-count s-t path by FIFO BFS in grid order, or None."""
        tg = self._tg
        parent = np.empty(self.grid.num_turns, dtype=np.int32)
        queue = np.empty(self.grid.num_turns, dtype=np.int32)
        path = _kernels.impl.shortest_path(
            tg.adj, tg.gate_kind, tg.s_turns, tg.in_edge, tg.out_edge,
            self.turn_alive, self.slot_alive, self.gate_open,
            parent, queue, tg)
        if path is None:
            return None
        return TurnPath(self.grid, "s-t", tuple(int(x) for x in path))


# -- module-level operation names ------------------------------------------------


def build_R(grid: TriangleGrid) -> ResidualDigraph:
    """The full turn digraph with all gates open."""
    return ResidualDigraph(grid, "R")


def restrict_to_f(R: ResidualDigraph, f: FlowClass, caps: CapacityMap) -> ResidualDigraph:
    """Residual digraph of a bounded hive flow: negative contributions of flat
    rhombi deleted, gates of saturated border edges closed."""
    if R.grid.n != f.grid.n:
        raise GridMismatchError("flow lives on a different grid")
    if not f.in_B(caps):
        raise InvalidInstanceError("flow is not in the bounded hive polytope")
    return ResidualDigraph(f.grid, "R_f", flow=f, caps=caps, step=1)


def restrict_scaled(R: ResidualDigraph, f: FlowClass, caps: CapacityMap,
                    ell: int) -> ResidualDigraph:
    """Scaled residual digraph: gates additionally need headroom 2^ell."""
    if ell < 0:
        raise InvalidInstanceError("scaling level must be nonnegative")
    if R.grid.n != f.grid.n:
        raise GridMismatchError("flow lives on a different grid")
    step = 1 << ell
    if step > 1 and (f.delta % step).any():
        raise InvalidInstanceError(f"flow is not {step}-integral")
    if not f.in_B(caps):
        raise InvalidInstanceError("flow is not in the bounded hive polytope")
    return ResidualDigraph(f.grid, "R_f^l", flow=f, caps=caps, step=step)


def shortest_st_turnpath(D: ResidualDigraph) -> Optional[TurnPath]:
    return D.shortest_st_turnpath()


def project(grid: TriangleGrid, p: Union[TurnPath, Mapping[int, int], Sequence[int]]) -> FlowClass:
    """Linear projection from turn usage to a flow class.

    Each turn moves one unit into its triangle through the entering side and
    out through the leaving side; accepts a TurnPath, a sequence of turn ids,
    or a turn multiset given as an id -> multiplicity mapping.
    """
    if isinstance(p, TurnPath):
        items: Iterator[tuple] = ((t, 1) for t in p.turn_ids)
    elif isinstance(p, Mapping):
        items = iter(p.items())
    else:
        items = ((t, 1) for t in p)
    tg = _turn_graph(grid)
    delta = np.zeros(grid.num_edges, dtype=np.int64)
    # only turns inside the upright triangle of an edge move flow through it:
    # for conserved turn multisets the downright-side count is the same number,
    # so adding it as well would double every interior crossing
    for t, w in items:
        if w < 0:
            raise ValueError("turn multiplicities must be nonnegative")
        if tg.upright[t]:
            delta[tg.in_edge[t]] += w
            delta[tg.out_edge[t]] -= w
    return FlowClass(grid, delta, validate=False)


def turnpath_slack(p: TurnPath, rho: Rhombus) -> int:
    """Slack of a complete turnpath at one rhombus: positive contributions it
    uses minus negative ones (always in -4..4)."""
    grid = p.grid
    sc = grid.slack_contributions(rho)
    used_turns = set(p.turn_ids)
    used_edges = p.turnedges()

    def uses(x) -> bool:
        if isinstance(x, TurnEdge):
            return (grid.turn_id(x.tail), grid.turn_id(x.head)) in used_edges
        return grid.turn_id(x) in used_turns

    value = sum(1 for x in sc.plus if uses(x)) - sum(1 for x in sc.minus if uses(x))
    assert -4 <= value <= 4
    return value
