"""Hive labels, the coboundary isomorphism, and flatspace decompositions."""

import random

import pytest

from hiveflow.errors import FlowConsistencyError
from hiveflow.flow import zero_flow
from hiveflow.grid import Partition, VertexId, new_grid
from hiveflow.hives import (HiveLabel, flatspaces, flow_to_hive, hive_to_flow,
                            side_throughputs)
from hiveflow.randomgen import random_flow, random_hive_flow
from hiveflow.solver import decide_scaling

N11_LAM = (5, 5, 5, 5, 3, 2, 1, 1, 1, 0, 0)
N11_MU = (8, 8, 7, 5, 3, 3, 3, 3, 0, 0, 0)
N11_NU = (10, 9, 9, 9, 7, 4, 4, 4, 4, 4, 4)


def test_zero_round_trip():
    g = new_grid(3)
    h = flow_to_hive(zero_flow(g))
    assert not h.values.any()
    assert hive_to_flow(h) == zero_flow(g)


def test_round_trip_random(seed):
    rng = random.Random(seed)
    for n in range(1, 6):
        g = new_grid(n)
        for _ in range(40):
            f = random_flow(g, rng)
            assert hive_to_flow(flow_to_hive(f)) == f
            h = flow_to_hive(f)
            vals = [rng.randint(-5, 5) for _ in range(g.num_vertices)]
            vals[0] = 0
            h2 = HiveLabel(g, vals)
            assert flow_to_hive(hive_to_flow(h2)) == h2


def test_top_label_must_vanish():
    g = new_grid(2)
    with pytest.raises(ValueError):
        HiveLabel(g, [1] + [0] * (g.num_vertices - 1))


def test_capacity_achieving_border_labels_are_partial_sums():
    lam, mu, nu = Partition((2, 1)), Partition((2, 1)), Partition((3, 2, 1))
    report = decide_scaling(lam, mu, nu)
    assert report.positive
    h = flow_to_hive(report.final_flow)
    n = 3
    for m in range(1, n + 1):
        assert h[VertexId(m, m)] == sum(lam.padded(n)[:m])
        assert h[VertexId(m, 0)] == sum(nu.padded(n)[:m])
    bottom = [h[VertexId(n, c)] for c in range(n + 1)]
    # right to left along the bottom the labels climb by mu
    assert bottom[n] == lam.weight
    for i, c in enumerate(range(n - 1, -1, -1), start=1):
        assert bottom[c] == lam.weight + sum(mu.padded(n)[:i])


def test_hive_violation_detected():
    g = new_grid(2)
    # the middle label dips below both neighbours: rhombus inequality breaks
    h = HiveLabel.from_mapping(
        g, {VertexId(1, 0): 5, VertexId(1, 1): -9,
            VertexId(2, 0): 5, VertexId(2, 1): 5, VertexId(2, 2): 5})
    assert not h.is_hive()
    assert not hive_to_flow(h).is_hive_flow()


def test_boundary_bounds_on_random_hives(seed):
    # boundary min and n times boundary max bracket every hive label
    # (the top label 0 is on the boundary, so the max is never negative)
    rng = random.Random(seed + 9)
    for n in (2, 3, 4, 5):
        g = new_grid(n)
        border_vs = [v for v in g.vertices if v.i == 0 or v.i == v.m or v.m == n]
        for _ in range(50):
            f = random_hive_flow(g, rng)
            h = flow_to_hive(f)
            lo = min(h[v] for v in border_vs)
            hi = max(h[v] for v in border_vs)
            assert hi >= 0
            for v in g.vertices:
                assert lo <= h[v] <= n * hi


class TestFlatspaces:
    def test_zero_flow_single_triangle(self):
        for n in (1, 2, 4):
            fs = flatspaces(zero_flow(new_grid(n)))
            assert len(fs) == 1
            assert fs[0].shape == "triangle"
            assert len(fs[0].triangles) == n * n

    def test_strictly_concave_hive_gives_singletons(self):
        # h = -(m^2 + i^2 + (m-i)^2) has slack exactly 2 on every rhombus
        for n in (2, 3, 5):
            g = new_grid(n)
            vals = {v: -(v.m ** 2 + v.i ** 2 + (v.m - v.i) ** 2) for v in g.vertices}
            f = hive_to_flow(HiveLabel.from_mapping(g, vals))
            assert all(f.slack(rho) == 2 for rho in g.rhombi)
            fs = flatspaces(f)
            assert len(fs) == n * n
            assert all(s.shape == "triangle" and len(s.triangles) == 1 for s in fs)

    def test_rejects_non_hive(self):
        g = new_grid(3)
        f = hive_to_flow(HiveLabel.from_mapping(g, {VertexId(2, 1): 1}))
        with pytest.raises(FlowConsistencyError):
            flatspaces(f)

    def test_partition_covers_all_triangles(self, seed):
        rng = random.Random(seed + 10)
        for n in (3, 4, 5):
            g = new_grid(n)
            for _ in range(25):
                f = random_hive_flow(g, rng)
                fs = flatspaces(f)
                seen = set()
                for sp in fs:
                    assert not (seen & sp.triangles)
                    seen |= sp.triangles
                    assert sp.shape in {"triangle", "parallelogram", "trapezoid",
                                        "pentagon", "hexagon"}
                assert len(seen) == g.num_triangles

    def test_convexity_via_flat_closure(self, seed):
        # inside one flatspace every rhombus made of two member triangles is flat
        rng = random.Random(seed + 11)
        g = new_grid(5)
        for _ in range(25):
            f = random_hive_flow(g, rng)
            for sp in flatspaces(f):
                for rho in g.rhombi:
                    if set(rho.triangles) <= sp.triangles:
                        assert f.slack(rho) == 0

    def test_n11_instance_has_varied_shapes(self):
        report = decide_scaling(N11_LAM, N11_MU, N11_NU)
        fs = flatspaces(report.final_flow)
        assert len(fs) > 1
        shapes = {sp.shape for sp in fs}
        assert shapes <= {"triangle", "parallelogram", "trapezoid", "pentagon", "hexagon"}
        assert len(shapes) >= 2
        assert sum(len(sp.triangles) for sp in fs) == 11 * 11

    def test_flat_diagonals_exactly_inside_flatspaces(self):
        # slack vanishes on a diagonal iff both halves share a flatspace;
        # diagonals on flatspace borders carry strictly positive slack
        f = decide_scaling(N11_LAM, N11_MU, N11_NU).final_flow
        g = f.grid
        space_of = {}
        for si, sp in enumerate(flatspaces(f)):
            for t in sp.triangles:
                space_of[t] = si
        for rho in g.rhombi:
            same = space_of[rho.triangles[0]] == space_of[rho.triangles[1]]
            assert (f.slack(rho) == 0) == same
            if not same:
                assert f.slack(rho) > 0

    def test_shared_side_exit_is_neighbors_entrance(self, seed):
        rng = random.Random(seed + 12)
        g = new_grid(4)
        for _ in range(30):
            f = random_hive_flow(g, rng)
            fs = flatspaces(f)
            by_edge = {}
            for si, sp in enumerate(fs):
                for side in sp.sides:
                    for e in side.edges:
                        by_edge.setdefault(e, []).append((si, side))
            for e, users in by_edge.items():
                if len(users) == 1:
                    assert g.is_border(e)
                    continue
                (ia, sa), (ib, sb) = users
                assert ia != ib
                assert set(sa.edges) == set(sb.edges)  # whole side is shared
                assert sa.entrance == sb.exit and sa.exit == sb.entrance


class TestSideThroughputs:
    def test_constant_along_own_sides(self, seed):
        rng = random.Random(seed + 13)
        for n in (3, 4, 5):
            g = new_grid(n)
            for _ in range(20):
                f = random_hive_flow(g, rng)
                for sp in flatspaces(f):
                    for side in sp.sides:
                        vals = side_throughputs(f, sp, side)
                        assert len(set(vals)) == 1

    def test_zero_flow_all_zero(self):
        g = new_grid(3)
        f = zero_flow(g)
        sp = flatspaces(f)[0]
        for side in sp.sides:
            assert side_throughputs(f, sp, side) == [0] * len(side.edges)

    def test_hive_preserving_direction_weakly_decreasing(self):
        # d = g - f for capacity achieving g, f is f-hive preserving
        from hiveflow.enumeration import enumerate_P
        pts = enumerate_P((2, 1, 0), (2, 1, 0), (3, 2, 1))
        assert len(pts) == 2
        f, g2 = pts
        d = g2 - f
        for sp in flatspaces(f):
            for side in sp.sides:
                vals = side_throughputs(f, sp, side, d=d)
                assert all(a >= b for a, b in zip(vals, vals[1:]))

    def test_n11_instance_side_constancy(self):
        report = decide_scaling(N11_LAM, N11_MU, N11_NU)
        f = report.final_flow
        for sp in flatspaces(f):
            for side in sp.sides:
                assert len(set(side_throughputs(f, sp, side))) == 1
