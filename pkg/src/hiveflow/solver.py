"""Positivity deciders: shortest augmenting turnpaths, plain and scaled.

``decide_plain`` augments unit flow along shortest s-t paths of the residual
digraph until blocked; ``decide_scaling`` runs the same loop once per scaling
level 2^l for l from ceil(log2 nu_1) down to 0.  The verdict is whether the
final throughput meets the target |nu|.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import _kernels
from .errors import InvalidInstanceError
from .flow import FlowClass
from .grid import (CapacityMap, Partition, TriangleGrid, border_capacities,
                   common_length, new_grid)
from .residual import ResidualDigraph, _turn_graph, project, restrict_scaled

__all__ = ["SolveReport", "decide_plain", "decide_scaling", "decide", "verify_certificate"]


@dataclass
class SolveReport:
    """Outcome and instrumentation of one solve."""

    algorithm: str  # "plain" or "scaling"
    lam: Partition
    mu: Partition
    nu: Partition
    n: int
    positive: bool
    throughput: int
    target: int
    augmentations_per_phase: list
    bfs_calls: int
    final_flow: FlowClass
    phase_end_throughput: list = field(default_factory=list)

    @property
    def total_augmentations(self) -> int:
        return sum(self.augmentations_per_phase)


def _prepare(lam, mu, nu) -> CapacityMap:
    lam, mu, nu = Partition(lam), Partition(mu), Partition(nu)
    n = common_length(lam, mu, nu)
    return border_capacities(new_grid(n), lam, mu, nu)


def _strict_default(n: int, strict: Optional[bool]) -> bool:
    return (n <= 12) if strict is None else strict


def _run_phases(caps: CapacityMap, levels: Sequence[int], algorithm: str,
                strict: bool) -> SolveReport:
    grid = caps.grid
    n = grid.n
    target = caps.target
    tg = _turn_graph(grid)
    delta = np.zeros(grid.num_edges, dtype=np.int64)

    per_phase = []
    phase_end = []
    bfs_total = 0
    for ell in levels:
        step = 1 << ell
        if strict:
            naug, nbfs = _phase_checked(grid, caps, delta, ell)
        else:
            naug, nbfs = _kernels.impl.run_phase(
                tg, delta, caps.values, grid._border_kind, step,
                grid._slack_e1, grid._slack_s1, grid._slack_e2, grid._slack_s2,
                tg.minus_turns, tg.minus_src, tg.minus_slot)
        per_phase.append(naug)
        bfs_total += nbfs
        if step > 1:
            assert not (delta % step).any(), "flow lost its phase integrality"
        phase_end.append(_border_throughput(grid, delta))

    f = FlowClass(grid, delta, validate=False)
    thr = f.throughput()
    positive = thr == target
    report = SolveReport(
        algorithm=algorithm, lam=caps.lam, mu=caps.mu, nu=caps.nu, n=n,
        positive=positive, throughput=thr, target=target,
        augmentations_per_phase=per_phase, bfs_calls=bfs_total,
        final_flow=f, phase_end_throughput=phase_end)
    _check_counters(report, levels)
    if not verify_certificate(report, caps):
        raise AssertionError("internal consistency check failed on the final flow")
    return report


def _border_throughput(grid: TriangleGrid, delta: np.ndarray) -> int:
    kinds = grid._border_kind
    return int(delta[(kinds == 1) | (kinds == 2)].sum())


def _phase_checked(grid: TriangleGrid, caps: CapacityMap, delta: np.ndarray,
                   ell: int) -> tuple:
    """Step-by-step phase used in strict mode: rechecks membership in the
    bounded polytope after every augmentation."""
    step = 1 << ell
    R = ResidualDigraph(grid, "R")
    naug = nbfs = 0
    while True:
        f = FlowClass(grid, delta, validate=False)
        D = restrict_scaled(R, f, caps, ell)
        nbfs += 1
        p = D.shortest_st_turnpath()
        if p is None:
            break
        naug += 1
        g = f.add_scaled(project(grid, p), step)
        if not g.in_B(caps):
            raise AssertionError(
                f"augmentation left the bounded polytope at level {ell}")
        delta[:] = g.delta
    return naug, nbfs


def _check_counters(report: SolveReport, levels: Sequence[int]) -> None:
    n = report.n
    counts = report.augmentations_per_phase
    assert all(c <= 6 * n for c in counts[1:]), "phase exceeded 6n augmentations"
    if report.algorithm == "scaling" and len(levels) > 1:
        log_nu1 = levels[0]
        assert report.total_augmentations <= 6 * n * log_nu1 + 1, \
            "total augmentations exceeded the scaling bound"
        if report.positive:
            for ell, end_thr in zip(levels, report.phase_end_throughput):
                assert report.target - end_thr < 3 * n * (1 << ell), \
                    "scaling gap bound violated"


def decide_plain(lam, mu, nu, *, strict: Optional[bool] = None) -> SolveReport:
    """Repeated unit augmentation along shortest s-t turnpaths."""
    caps = _prepare(lam, mu, nu)
    return _run_phases(caps, [0], "plain", _strict_default(caps.grid.n, strict))


def decide_scaling(lam, mu, nu, *, strict: Optional[bool] = None) -> SolveReport:
    """Capacity scaling: quanta 2^l for l from ceil(log2 nu_1) down to 0.

    Requires nu_1 >= max(lambda_1, mu_1); a violation cannot be positive and
    short-circuits to a negative verdict without running.
    """
    caps = _prepare(lam, mu, nu)
    grid, n = caps.grid, caps.grid.n
    nu1 = caps.nu[0] if caps.nu else 0
    lam1 = caps.lam[0] if caps.lam else 0
    mu1 = caps.mu[0] if caps.mu else 0
    if caps.target == 0:
        f = FlowClass.zero(grid)
        return SolveReport("scaling", caps.lam, caps.mu, caps.nu, n, True, 0, 0,
                           [0], 0, f, [0])
    if nu1 < max(lam1, mu1):
        f = FlowClass.zero(grid)
        return SolveReport("scaling", caps.lam, caps.mu, caps.nu, n, False, 0,
                           caps.target, [0], 0, f, [0])
    levels = list(range((nu1 - 1).bit_length(), -1, -1))
    return _run_phases(caps, levels, "scaling", _strict_default(n, strict))


def decide(lam, mu, nu, algorithm: str = "scaling", *,
           strict: Optional[bool] = None) -> SolveReport:
    if algorithm == "plain":
        return decide_plain(lam, mu, nu, strict=strict)
    if algorithm == "scaling":
        return decide_scaling(lam, mu, nu, strict=strict)
    raise ValueError(f"unknown algorithm {algorithm!r}")


def verify_certificate(report: SolveReport, caps: Optional[CapacityMap] = None) -> bool:
    """Recheck a report from scratch: closedness, slacks, border bounds,
    tightness and the verdict's consistency with the counters."""
    try:
        if caps is None:
            caps = border_capacities(report.final_flow.grid,
                                     report.lam, report.mu, report.nu)
    except InvalidInstanceError:
        return False
    f = report.final_flow
    try:
        f.check_closedness()
        thr = f.throughput()
    except Exception:
        return False
    if f.grid.n != caps.grid.n or report.target != caps.target:
        return False
    if thr != report.throughput or report.positive != (thr == report.target):
        return False
    if not f.in_B(caps):
        return False
    if report.positive and not f.in_P(caps):
        return False
    if not report.positive and report.algorithm == "plain" and f.in_P(caps):
        return False
    return True
