"""Both deciders, their counters and the certificate verifier."""

import itertools
import random

import pytest

from hiveflow.errors import InvalidInstanceError
from hiveflow.flow import FlowClass
from hiveflow.grid import Partition, VertexId, border_capacities, new_grid
from hiveflow.hives import HiveLabel
from hiveflow.lr_oracle import lr_positive
from hiveflow.randomgen import rand_valid_triple
from hiveflow.residual import build_R, restrict_to_f
from hiveflow.solver import (SolveReport, decide, decide_plain, decide_scaling,
                             verify_certificate)

N11 = ((5, 5, 5, 5, 3, 2, 1, 1, 1, 0, 0),
       (8, 8, 7, 5, 3, 3, 3, 3, 0, 0, 0),
       (10, 9, 9, 9, 7, 4, 4, 4, 4, 4, 4))


@pytest.mark.parametrize("lam,mu,nu,positive", [
    ((1, 0), (1, 0), (1, 1), True),
    ((2, 0), (1, 1), (2, 2), False),
    ((), (), (), True),
    ((2, 1), (2, 1), (3, 2, 1), True),
    ((1,), (1,), (2,), True),
])
def test_known_verdicts(lam, mu, nu, positive):
    for algorithm in ("plain", "scaling"):
        report = decide(lam, mu, nu, algorithm=algorithm)
        assert report.positive is positive
        assert report.positive == (report.throughput == report.target)
        assert verify_certificate(report)


def test_weight_mismatch_rejected():
    with pytest.raises(InvalidInstanceError):
        decide_plain((1,), (1,), (3,))
    with pytest.raises(InvalidInstanceError):
        decide_scaling((2, 2), (1,), (2, 2))


def test_nu1_precondition_short_circuits():
    # nu_1 < max(lambda_1, mu_1) cannot be positive; scaling refuses to run
    report = decide_scaling((3,), (1,), (2, 2))
    assert not report.positive
    assert report.bfs_calls == 0
    assert not lr_positive((3,), (1,), (2, 2))
    # the plain algorithm reaches the same verdict by exhaustion
    assert not decide_plain((3,), (1,), (2, 2)).positive


def test_n11_reference_instance():
    lam, mu, nu = N11
    report = decide_scaling(lam, mu, nu)
    assert report.positive and report.throughput == 68
    assert report.n == 11
    # the opening phase uses a quantum above nu_1, so it cannot augment
    assert report.augmentations_per_phase[0] <= 1
    plain = decide_plain(lam, mu, nu)
    assert plain.positive
    assert plain.total_augmentations == 68


def test_unit_nu_head_is_single_phase():
    report = decide_scaling((1,), (), (1,))
    assert report.positive
    assert len(report.augmentations_per_phase) == 1
    plain = decide_plain((1,), (), (1,))
    assert plain.augmentations_per_phase == report.augmentations_per_phase


def test_agreement_with_oracle_random(seed):
    rng = random.Random(seed)
    for _ in range(400):
        n = rng.randint(1, 4)
        lam, mu, nu = rand_valid_triple(rng, n, 6)
        a = decide_plain(lam, mu, nu, strict=False)
        b = decide_scaling(lam, mu, nu, strict=False)
        assert a.positive == b.positive == lr_positive(lam, mu, nu), (lam, mu, nu)


def test_strict_and_kernel_paths_agree(seed):
    rng = random.Random(seed + 1)
    for _ in range(60):
        lam, mu, nu = rand_valid_triple(rng, rng.randint(2, 5), 5)
        a = decide_scaling(lam, mu, nu, strict=True)
        b = decide_scaling(lam, mu, nu, strict=False)
        assert a.positive == b.positive
        assert a.final_flow == b.final_flow
        assert a.augmentations_per_phase == b.augmentations_per_phase
        assert a.bfs_calls == b.bfs_calls


def test_optimality_criterion_at_exit(seed):
    rng = random.Random(seed + 2)
    for _ in range(40):
        lam, mu, nu = rand_valid_triple(rng, 3, 4)
        report = decide_plain(lam, mu, nu)
        caps = border_capacities(report.final_flow.grid, lam, mu, nu)
        D = restrict_to_f(build_R(caps.grid), report.final_flow, caps)
        assert D.shortest_st_turnpath() is None


def _max_throughput_brute(caps) -> int:
    """Independent oracle: maximize throughput over all integral bounded hive
    flows by trying every admissible border profile with every admissible
    interior filling (tiny instances only)."""
    g = caps.grid
    n = g.n
    from hiveflow.grid import EdgeId, Side
    right = [caps[EdgeId(r, r, Side.RIGHT)] for r in range(n)]
    left = [caps[EdgeId(r, 0, Side.LEFT)] for r in range(n)]
    bottom = [caps[EdgeId(n - 1, c, Side.BOTTOM)] for c in range(n)]
    interior = [VertexId(m, i) for m in range(2, n) for i in range(1, m)]
    best = -1
    r_choices = itertools.product(*[range(b + 1) for b in right])
    for rr in r_choices:
        for bb in itertools.product(*[range(b + 1) for b in bottom]):
            inflow = sum(rr) + sum(bb)
            for ll in itertools.product(*[range(b + 1) for b in left]):
                if sum(ll) != inflow:
                    continue
                # border labels from the profile
                vals = {VertexId(0, 0): 0}
                for m in range(1, n + 1):
                    vals[VertexId(m, m)] = vals[VertexId(m - 1, m - 1)] + rr[m - 1]
                    vals[VertexId(m, 0)] = vals[VertexId(m - 1, 0)] + ll[m - 1]
                for c in range(n - 1, 0, -1):
                    vals[VertexId(n, c)] = vals[VertexId(n, c + 1)] + bb[c]
                ok_best = -1
                for combo in itertools.product(range(0, n * max(1, caps.target) + 1),
                                               repeat=len(interior)):
                    for v, x in zip(interior, combo):
                        vals[v] = x
                    h = HiveLabel.from_mapping(g, vals)
                    if h.is_hive():
                        ok_best = inflow
                        break
                for v in interior:
                    vals.pop(v, None)
                if ok_best > best:
                    best = ok_best
    return best


def test_integral_optimum_matches_brute_force(seed):
    rng = random.Random(seed + 3)
    checked = 0
    for _ in range(25):
        lam, mu, nu = rand_valid_triple(rng, 2, 2)
        try:
            caps = border_capacities(new_grid(2), lam, mu, nu)
        except InvalidInstanceError:
            continue
        report = decide_plain(lam, mu, nu)
        assert report.throughput == _max_throughput_brute(caps)
        checked += 1
    assert checked >= 10


def test_counters_within_bounds(seed):
    rng = random.Random(seed + 4)
    for _ in range(60):
        n = rng.randint(2, 6)
        lam, mu, nu = rand_valid_triple(rng, n, 50)
        report = decide_scaling(lam, mu, nu, strict=False)
        n_ = report.n
        counts = report.augmentations_per_phase
        assert all(c <= 6 * n_ for c in counts[1:])
        if len(counts) > 1:
            nu1 = report.nu[0]
            assert report.total_augmentations <= 6 * n_ * (nu1 - 1).bit_length() + 1


def test_scaling_gap_bound_on_positive_instances(seed):
    rng = random.Random(seed + 5)
    for _ in range(40):
        n = rng.randint(2, 5)
        lam = Partition(sorted((rng.randint(0, 20) for _ in range(n)), reverse=True))
        mu = Partition(sorted((rng.randint(0, 20) for _ in range(n)), reverse=True))
        nu = Partition(a + b for a, b in zip(lam.padded(n), mu.padded(n)))
        report = decide_scaling(lam, mu, nu, strict=False)
        assert report.positive
        levels = range((nu[0] - 1).bit_length(), -1, -1)
        for ell, end_thr in zip(levels, report.phase_end_throughput):
            assert report.target - end_thr < 3 * report.n * (1 << ell)


def test_saturation_both_directions(seed):
    rng = random.Random(seed + 6)
    for _ in range(100):
        lam, mu, nu = rand_valid_triple(rng, 3, 4)
        base = decide_scaling(lam, mu, nu, strict=False).positive
        for N in (2, 3):
            s = decide_scaling(Partition(lam).stretched(N), Partition(mu).stretched(N),
                               Partition(nu).stretched(N), strict=False).positive
            assert s == base


class TestVerifyCertificate:
    def test_valid_reports_verify(self, seed):
        rng = random.Random(seed + 7)
        for _ in range(30):
            lam, mu, nu = rand_valid_triple(rng, 3, 4)
            assert verify_certificate(decide_scaling(lam, mu, nu))

    def test_perturbed_flow_fails(self):
        report = decide_scaling((2, 1), (2, 1), (3, 2, 1))
        delta = report.final_flow.delta.copy()
        delta[0] += 1
        bad = SolveReport(
            algorithm=report.algorithm, lam=report.lam, mu=report.mu,
            nu=report.nu, n=report.n, positive=report.positive,
            throughput=report.throughput, target=report.target,
            augmentations_per_phase=report.augmentations_per_phase,
            bfs_calls=report.bfs_calls,
            final_flow=FlowClass(report.final_flow.grid, delta, validate=False))
        assert not verify_certificate(bad)

    def test_edited_target_fails(self):
        report = decide_scaling((2, 1), (2, 1), (3, 2, 1))
        report.target += 1
        assert not verify_certificate(report)
