"""Command line front end.

Subcommands: decide (positivity verdict with certificate), count (exact
enumeration), oracle (tableau count), render (DOT or TikZ picture of a
flow), selftest (randomized invariant suites).  Machine output goes to
stdout as JSON or a document; diagnostics go to stderr.  Exit codes:
0 ok/positive, 1 not positive, 2 invalid input, 3 cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from typing import Optional

from . import _kernels
from .errors import CapExceededError, FlowConsistencyError, InvalidInstanceError
from .flow import FlowClass, decompose
from .grid import EdgeId, Partition, border_capacities, new_grid
from .hives import flatspaces, flow_to_hive, hive_to_flow
from .lr_oracle import lr_count
from .residual import build_R, project, restrict_to_f, turnpath_slack
from .solver import decide as _decide
from .solver import verify_certificate


def _parse_partition(text: str, name: str) -> Partition:
    text = text.strip()
    if not text:
        return Partition()
    try:
        parts = [int(x) for x in text.split(",")]
    except ValueError:
        raise InvalidInstanceError(f"--{name}: expected comma-separated integers, got {text!r}")
    if any(x < 0 for x in parts):
        raise InvalidInstanceError(f"--{name}: parts must be nonnegative")
    try:
        return Partition(parts)
    except InvalidInstanceError:
        raise InvalidInstanceError(f"--{name}: parts must be weakly decreasing, got {text!r}")


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


def _flow_json(f: FlowClass) -> dict:
    return {e.key: int(f.delta[f.grid.edge_index(e)]) for e in f.grid.edges}


def _load_flow(path: str) -> FlowClass:
    with open(path) as fh:
        data = json.load(fh)
    mapping = data.get("flow", data) if isinstance(data, dict) else None
    if not isinstance(mapping, dict) or not mapping:
        raise InvalidInstanceError(f"{path}: expected a JSON flow map")
    try:
        entries = {EdgeId.from_key(k): int(v) for k, v in mapping.items()}
    except ValueError as exc:
        raise InvalidInstanceError(f"{path}: {exc}")
    n = max(e.row for e in entries) + 1
    grid = new_grid(n)
    if len(entries) != grid.num_edges:
        raise InvalidInstanceError(
            f"{path}: expected {grid.num_edges} edges for n={n}, got {len(entries)}")
    try:
        return FlowClass.from_mapping(grid, entries)
    except FlowConsistencyError as exc:
        raise InvalidInstanceError(f"{path}: {exc}")


# -- rendering ---------------------------------------------------------------------


def _xy(m: int, i: int) -> str:
    """Exact decimal coordinates (unit 1/2 horizontally, 0.866 vertically)."""
    tx = 2 * i - m
    x = f"{tx // 2}.0" if tx % 2 == 0 else f"{(tx - 1) // 2}.5" if tx > 0 else f"-{(-tx - 1) // 2}.5"
    ym = 866 * m
    y = f"-{ym // 1000}.{ym % 1000:03d}" if m else "0.000"
    return f"{x},{y}"


def render_dot(f: FlowClass) -> str:
    grid = f.grid
    sigma = f.slack_vector()
    spaces = flatspaces(f)
    lines = ["digraph hiveflow {"]
    lines.append('  graph [splines=line];')
    lines.append('  node [shape=point, width=0.06];')
    for i, sp in enumerate(spaces):
        tris = ";".join(f"{t.row},{t.col},{'U' if t.upright else 'D'}"
                        for t in sorted(sp.triangles))
        lines.append(f"  // flatspace {i}: {sp.shape} [{tris}]")
    for v in grid.vertices:
        lines.append(f'  "v{v.m}_{v.i}" [pos="{_xy(v.m, v.i)}!"];')
    for e in grid.edges:
        tail, head = grid.edge_endpoints(e)
        d = f[e]
        rho_idx = grid._rho_of_diag[grid.edge_index(e)]
        flat = rho_idx >= 0 and sigma[rho_idx] == 0
        style = "dashed" if flat else "solid"
        a, b = (tail, head) if d >= 0 else (head, tail)
        attrs = [f'style={style}']
        if d != 0:
            attrs.append(f'label="{abs(d)}"')
        else:
            attrs.append("dir=none")
        lines.append(f'  "v{a.m}_{a.i}" -> "v{b.m}_{b.i}" [{", ".join(attrs)}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def render_tikz(f: FlowClass) -> str:
    grid = f.grid
    spaces = flatspaces(f)
    out = [
        r"\documentclass[tikz,border=2mm]{standalone}",
        r"\begin{document}",
        r"\begin{tikzpicture}[x=10mm,y=10mm]",
    ]
    for sp in sorted(spaces, key=lambda s: min(s.triangles)):
        if len(sp.triangles) < 2:
            continue
        for t in sorted(sp.triangles):
            pts = " -- ".join(f"({_xy(v.m, v.i)})" for v in grid.triangle_vertices(t))
            out.append(rf"\fill[black!12] {pts} -- cycle;")
    for e in grid.edges:
        tail, head = grid.edge_endpoints(e)
        out.append(rf"\draw[gray] ({_xy(tail.m, tail.i)}) -- ({_xy(head.m, head.i)});")
    for e in grid.edges:
        d = f[e]
        if d == 0:
            continue
        tail, head = grid.edge_endpoints(e)
        a, b = (tail, head) if d > 0 else (head, tail)
        out.append(
            rf"\draw[->,thick] ({_xy(a.m, a.i)}) -- node[midway,font=\tiny,fill=white,inner sep=1pt] {{{abs(d)}}} ({_xy(b.m, b.i)});"
        )
    out += [r"\end{tikzpicture}", r"\end{document}"]
    return "\n".join(out) + "\n"


# -- selftest suites --------------------------------------------------------------


def _selftest(seed: int, log) -> dict:
    from .randomgen import (rand_valid_triple, random_flow, random_hive_flow)
    from .solver import decide_plain, decide_scaling

    rng = random.Random(seed)
    results = {}

    def suite(name):
        def deco(fn):
            try:
                fn()
                results[name] = "ok"
                log(f"ok   {name}")
            except Exception as exc:  # report, keep going
                results[name] = f"FAIL: {exc}"
                log(f"FAIL {name}: {exc}")
            return fn
        return deco

    @suite("hexagon-equality")
    def _hexagon():
        for n in range(2, 6):
            grid = new_grid(n)
            hexes = grid.hexagons()
            for _ in range(60):
                fl = random_flow(grid, rng)
                for _v, ring in hexes:
                    s = [fl.slack(r) for r in ring]
                    for j in range(6):
                        assert s[j] + s[(j + 1) % 6] == s[(j + 3) % 6] + s[(j + 4) % 6]

    @suite("antipodal-support")
    def _antipodal():
        for n in range(2, 5):
            grid = new_grid(n)
            for _ in range(40):
                d = random_hive_flow(grid, rng)
                for rho in grid.rhombi:
                    sc = grid.slack_contributions(rho)
                    for x in sc.minus:
                        if d.supports(x):
                            assert d.supports(grid.antipodal(rho, x))

    @suite("hive-roundtrip")
    def _roundtrip():
        for n in range(1, 6):
            grid = new_grid(n)
            for _ in range(40):
                fl = random_flow(grid, rng)
                assert hive_to_flow(flow_to_hive(fl)) == fl

    @suite("turnpath-slack")
    def _tslack():
        for n in range(2, 5):
            lam = Partition([rng.randint(1, 5)])
            mu = Partition([rng.randint(1, 5)])
            nu = Partition([lam[0] + mu[0]])
            grid = new_grid(n)
            caps = border_capacities(grid, lam, mu, nu)
            R = build_R(grid)
            D = restrict_to_f(R, FlowClass.zero(grid), caps)
            p = D.shortest_st_turnpath()
            if p is None:
                continue
            fp = project(grid, p)
            for rho in grid.rhombi:
                assert turnpath_slack(p, rho) == fp.slack(rho)

    @suite("decomposition")
    def _decomp():
        for n in range(2, 5):
            grid = new_grid(n)
            for _ in range(20):
                fl = random_flow(grid, rng)
                parts = decompose(fl)
                assert parts is not None

    @suite("plain-vs-scaling")
    def _agree():
        for _ in range(60):
            lam, mu, nu = rand_valid_triple(rng, rng.randint(1, 4), 5)
            a = decide_plain(lam, mu, nu)
            b = decide_scaling(lam, mu, nu)
            assert a.positive == b.positive

    return results


# -- subcommand drivers --------------------------------------------------------------


def _cmd_decide(args) -> int:
    lam = _parse_partition(args.lam, "lambda")
    mu = _parse_partition(args.mu, "mu")
    nu = _parse_partition(args.nu, "nu")
    report = _decide(lam, mu, nu, algorithm=args.algorithm)
    caps = border_capacities(report.final_flow.grid, report.lam, report.mu, report.nu)
    if not verify_certificate(report, caps):
        print("internal error: certificate failed to verify", file=sys.stderr)
        return 2
    _emit({
        "positive": report.positive,
        "n": report.n,
        "target": report.target,
        "throughput": report.throughput,
        "augmentations": list(report.augmentations_per_phase),
        "bfs_calls": report.bfs_calls,
        "algorithm": report.algorithm,
        "flow": _flow_json(report.final_flow),
    })
    return 0 if report.positive else 1


def _cmd_count(args) -> int:
    from .enumeration import enumerate_P
    lam = _parse_partition(args.lam, "lambda")
    mu = _parse_partition(args.mu, "mu")
    nu = _parse_partition(args.nu, "nu")
    try:
        points = enumerate_P(lam, mu, nu, limit=args.limit)
    except CapExceededError:
        _emit({"count": "cap_exceeded", "limit": args.limit})
        return 3
    result = {"count": len(points)}
    if args.verify:
        oracle = lr_count(lam, mu, nu)
        result["oracle_count"] = oracle
        if oracle != len(points):
            _emit(result)
            print("count mismatch against the tableau oracle", file=sys.stderr)
            return 2
        result["verified"] = True
    _emit(result)
    return 0


def _cmd_oracle(args) -> int:
    lam = _parse_partition(args.lam, "lambda")
    mu = _parse_partition(args.mu, "mu")
    nu = _parse_partition(args.nu, "nu")
    _emit({"count": lr_count(lam, mu, nu)})
    return 0


def _cmd_render(args) -> int:
    if args.flow:
        f = _load_flow(args.flow)
    else:
        lam = _parse_partition(args.lam, "lambda")
        mu = _parse_partition(args.mu, "mu")
        nu = _parse_partition(args.nu, "nu")
        report = _decide(lam, mu, nu, algorithm=args.algorithm)
        f = report.final_flow
    if not f.is_hive_flow():
        print("flow is not a hive flow; refusing to render flatspaces", file=sys.stderr)
        return 2
    doc = render_tikz(f) if args.format == "tikz" else render_dot(f)
    sys.stdout.write(doc)
    return 0


def _cmd_selftest(args) -> int:
    seed = int(os.environ.get("HIVEFLOW_SEED", "0"))
    results = _selftest(seed, lambda msg: print(msg, file=sys.stderr))
    ok = all(v == "ok" for v in results.values())
    _emit({"backend": _kernels.backend_name, "seed": seed,
           "suites": results, "passed": ok})
    return 0 if ok else 1


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="hiveflow",
        description="Littlewood-Richardson positivity via hive flows")
    sub = ap.add_subparsers(dest="command", required=True)

    def add_instance_flags(p, required=True):
        p.add_argument("--lambda", dest="lam", default="", required=required,
                       help="comma-separated weakly decreasing parts")
        p.add_argument("--mu", dest="mu", default="", required=required)
        p.add_argument("--nu", dest="nu", default="", required=required)

    p = sub.add_parser("decide", help="decide positivity of the coefficient")
    add_instance_flags(p)
    p.add_argument("--algorithm", choices=("plain", "scaling"), default="scaling")
    p.set_defaults(fn=_cmd_decide)

    p = sub.add_parser("count", help="count capacity achieving hive flows")
    add_instance_flags(p)
    p.add_argument("--limit", type=int, default=10 ** 6)
    p.add_argument("--verify", action="store_true",
                   help="cross-check against the tableau oracle")
    p.set_defaults(fn=_cmd_count)

    p = sub.add_parser("oracle", help="count tableaux directly")
    add_instance_flags(p)
    p.set_defaults(fn=_cmd_oracle)

    p = sub.add_parser("render", help="draw a flow as DOT or TikZ")
    add_instance_flags(p, required=False)
    p.add_argument("--algorithm", choices=("plain", "scaling"), default="scaling")
    p.add_argument("--format", choices=("dot", "tikz"), default="dot")
    p.add_argument("--flow", default=None, metavar="PATH",
                   help="JSON flow map to render instead of solving")
    p.set_defaults(fn=_cmd_render)

    p = sub.add_parser("selftest", help="run the randomized invariant suites")
    p.set_defaults(fn=_cmd_selftest)
    return ap


def main(argv: Optional[list] = None) -> int:
    ap = _build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except InvalidInstanceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
