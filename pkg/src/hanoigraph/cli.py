"""Command-line interface.

Exit codes: 0 success, 1 a verification check found a counterexample,
2 usage or feasibility error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import graph, metric, solver, symmetry
from .cache import cache_filename, load_distance_table, save_distance_table
from .core import HanoiError, PuzzleParams, parse_state, render_state

CHECKS = ("lemma2", "prop1", "lemma4", "lemma5", "lemma6", "prop3", "adjacency", "theorem")


def _params(args) -> PuzzleParams:
    return PuzzleParams(args.k, args.n)


def _emit(line: str) -> None:
    sys.stdout.write(line + "\n")


def cmd_export(args) -> int:
    params = _params(args)
    if args.format == "dot":
        sys.stdout.write(graph.export_dot(params, color_substructures=args.color))
    else:
        sys.stdout.write(graph.export_adjlist(params))
    return 0


def cmd_degree_scan(args) -> int:
    params = _params(args)
    result = graph.degree_scan(params)
    if args.json:
        _emit(result.to_json(timing=not args.no_timing))
    else:
        _emit(f"H_{params.disks}^{params.pegs}: {params.order} vertices, "
              f"{graph.edge_count(params)} edges")
        for d, c in result.details["degree_histogram"].items():
            _emit(f"  degree {d:3d}: {c} vertices")
        _emit("lemma2: " + ("pass" if result.passed else f"FAIL {result.counterexample}"))
    return 0 if result.passed else 1


def cmd_dist(args) -> int:
    params = _params(args)
    u = parse_state(args.source, params)
    v = parse_state(args.target, params)
    if args.cache:
        path = os.path.join(args.cache, cache_filename(params, u.code))
        if os.path.exists(path):
            table = load_distance_table(path)
        else:
            table = metric.bfs_from(params, u, workers=args.workers)
            save_distance_table(table, args.cache)
        d = table[v]
    else:
        d = metric.distance(params, u, v)
    if args.json:
        _emit(json.dumps({"k": params.pegs, "n": params.disks, "from": render_state(u),
                          "to": render_state(v), "distance": d}))
    else:
        _emit(str(d))
    return 0


def cmd_aut(args) -> int:
    params = _params(args)
    aut = symmetry.enumerate_automorphisms(params, workers=args.workers)
    report = symmetry.verify_group_structure(aut)
    if args.json:
        _emit(json.dumps(report.as_dict(timing=not args.no_timing)))
    else:
        verdict = f"isomorphic to S_{params.pegs}" if report.is_symmetric_group else \
            f"NOT S_{params.pegs} ({report.failure})"
        _emit(f"H_{params.disks}^{params.pegs}: {report.order} automorphisms, {verdict}")
        for action in aut.corner_action:
            _emit("  corner action " + " ".join(map(str, action)))
    return 0 if report.is_symmetric_group else 1


def run_checks(params: PuzzleParams, names, workers: int = 1) -> list:
    aut = None
    results = []
    for name in names:
        if name in ("lemma6", "prop3", "theorem") and aut is None:
            aut = symmetry.enumerate_automorphisms(params, workers=workers)
        if name == "lemma2":
            results.append(graph.degree_scan(params))
        elif name == "prop1":
            results.append(symmetry.induced_maps_check(params))
        elif name == "lemma4":
            results.append(metric.largest_disk_check(params))
        elif name == "lemma5":
            results.append(metric.nearest_corner_check(params))
        elif name == "lemma6":
            results.append(symmetry.substructure_preservation_check(params, aut))
        elif name == "prop3":
            results.append(symmetry.corner_fixing_is_identity(params, aut))
        elif name == "adjacency":
            results.append(symmetry.adjacency_observation_check(params))
        elif name == "theorem":
            results.append(symmetry.theorem_check(params, aut))
        else:
            raise HanoiError(f"unknown check {name!r}")
    return results


def cmd_verify(args) -> int:
    params = _params(args)
    names = CHECKS if args.check == "all" else (args.check,)
    results = run_checks(params, names, workers=args.workers)
    for r in results:
        _emit(r.to_json(timing=not args.no_timing))
    return 0 if all(r.passed for r in results) else 1


def cmd_solve(args) -> int:
    params = _params(args)
    plan = solver.frame_stewart_plan(params, args.source, args.target)
    end = solver.replay_plan(params, plan.start, plan)
    if args.emit_moves:
        sys.stdout.write(plan.to_jsonl())
    else:
        _emit(f"Frame-Stewart plan for H_{params.disks}^{params.pegs}, peg {args.source} -> "
              f"{args.target}: {plan.claimed_length} moves, ends at {render_state(end)}")
    return 0


def cmd_compare(args) -> int:
    ok = True
    for n in range(1, args.n + 1):
        report = solver.compare_exact(PuzzleParams(args.k, n), args.source, args.target,
                                      workers=args.workers)
        ok &= report.equal
        if args.json:
            _emit(json.dumps(report.as_dict()))
        else:
            mark = "equal" if report.equal else "DIFFERENT"
            _emit(f"k={args.k} n={n:2d}  FS={report.fs_count:6d}  "
                  f"BFS={report.exact_distance:6d}  {mark}")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hanoigraph",
        description="Tower of Hanoi graphs: distances, automorphisms, Frame-Stewart plans.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--k", type=int, required=True, help="number of pegs")
        p.add_argument("--n", type=int, required=True, help="number of disks")
        p.set_defaults(func=func)
        return p

    def add_output(p, workers=True):
        p.add_argument("--json", action="store_true", help="JSON-lines output")
        p.add_argument("--no-timing", action="store_true", help="omit elapsed_ms fields")
        if workers:
            p.add_argument("--workers", type=int, default=1)

    p = add("export", cmd_export, "emit the graph as DOT or JSON-lines adjacency")
    p.add_argument("--format", choices=("dot", "adjlist"), default="dot")
    p.add_argument("--color", action="store_true", help="color nodes by substructure")

    p = add("degree-scan", cmd_degree_scan, "degree histogram and corner-degree check")
    add_output(p, workers=False)

    p = add("dist", cmd_dist, "exact distance between two states")
    p.add_argument("--from", dest="source", required=True)
    p.add_argument("--to", dest="target", required=True)
    p.add_argument("--cache", metavar="DIR", help="load/store full BFS tables here")
    add_output(p)

    p = add("aut", cmd_aut, "enumerate the automorphism group")
    add_output(p)

    p = add("verify", cmd_verify, "run verification checks (JSON-lines records)")
    p.add_argument("--check", choices=("all",) + CHECKS, default="all")
    add_output(p)

    p = add("solve", cmd_solve, "Frame-Stewart plan between two perfect states")
    p.add_argument("--from", dest="source", type=int, required=True)
    p.add_argument("--to", dest="target", type=int, required=True)
    p.add_argument("--emit-moves", action="store_true", help="print the plan as JSON lines")

    p = add("compare", cmd_compare, "Frame-Stewart count vs BFS distance for n = 1..N")
    p.add_argument("--from", dest="source", type=int, default=0)
    p.add_argument("--to", dest="target", type=int, default=1)
    add_output(p)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except HanoiError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
