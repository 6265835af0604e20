"""Exit criteria.  Each test registers one line in the terminal summary."""

import itertools
import json
import math
import random
import time

import numpy as np
import pytest

from hanoigraph.cli import run
from hanoigraph.core import PuzzleParams, parse_state, perfect_state
from hanoigraph.graph import degree_scan
from hanoigraph.metric import bfs_from, count_geodesics, largest_disk_check, nearest_corner_report
from hanoigraph.solver import compare_exact, frame_stewart_count
from hanoigraph.symmetry import (
    adjacency_observation_check,
    corner_fixing_is_identity,
    enumerate_automorphisms,
    induced_map,
    is_automorphism,
    substructure_preservation_check,
    verify_group_structure,
)

from oracles import adjacency_dict, brute_force_automorphisms

GRID = ([(3, n) for n in range(1, 8)] + [(4, n) for n in range(1, 6)]
        + [(5, n) for n in range(1, 5)] + [(6, n) for n in range(1, 4)])

_aut_cache = {}


def automorphisms(k, n):
    if (k, n) not in _aut_cache:
        start = time.perf_counter()
        aut = enumerate_automorphisms(PuzzleParams(k, n))
        _aut_cache[(k, n)] = (aut, time.perf_counter() - start)
    return _aut_cache[(k, n)]


def test_c01_main_theorem(criterion):
    entry = criterion("1  |Aut(H_n^k)| = k! and corner action is an isomorphism onto S_k, <60 s each")
    slowest = 0.0
    for k, n in GRID:
        aut, seconds = automorphisms(k, n)
        report = verify_group_structure(aut)
        slowest = max(slowest, seconds + report.elapsed_ms / 1000 - aut.elapsed_ms / 1000)
        assert aut.order == math.factorial(k), (k, n)
        assert report.is_symmetric_group, (k, n, report.failure)
        assert seconds < 60, (k, n, seconds)
    entry["note"] = f"{len(GRID)} instances, slowest {slowest:.2f}s"


def test_c02_induced_maps(criterion):
    entry = criterion("2  1000 random peg permutations induce automorphisms")
    rng = random.Random(20081)
    failures = 0
    for _ in range(1000):
        k, n = rng.choice(GRID)
        sigma = list(range(k))
        rng.shuffle(sigma)
        if not is_automorphism(induced_map(sigma, PuzzleParams(k, n)), PuzzleParams(k, n)).passed:
            failures += 1
    entry["note"] = f"{failures} failures"
    assert failures == 0


def test_c03_degrees(criterion):
    criterion("3  corners have degree k-1, others >= 2k-3, closed form m(k-1)-m(m-1)/2")
    for k, n in GRID:
        r = degree_scan(PuzzleParams(k, n))
        assert r.passed, (k, n, r.counterexample)


def test_c04_largest_disk_moves(criterion):
    criterion("4  geodesics from a corner move the largest disk 0 times inside, 1 outside")
    for k in (3, 4):
        for n in range(1, 6):
            r = largest_disk_check(PuzzleParams(k, n))
            assert r.passed, (k, n, r.counterexample)


def test_c05_nearest_corner(criterion):
    criterion("5  every vertex is strictly closest to its own substructure's corner")
    for k in (3, 4, 5):
        for n in range(1, 6):
            r = nearest_corner_report(PuzzleParams(k, n))
            assert r.passed, (k, n, r.counterexample)


def test_c06_substructures_and_corner_fixing(criterion):
    criterion("6  corner-fixing automorphism is the identity; fixed corners keep their substructure")
    for k, n in GRID:
        aut, _ = automorphisms(k, n)
        params = PuzzleParams(k, n)
        r6 = substructure_preservation_check(params, aut)
        r3 = corner_fixing_is_identity(params, aut)
        assert r6.passed, (k, n, r6.counterexample)
        assert r3.passed, (k, n, r3.counterexample)


def test_c07_adjacency_observation(criterion):
    criterion("7  i j..j has no neighbor in [j] and exactly one in each other [l]")
    for k in (3, 4, 5):
        for n in (2, 3, 4):
            r = adjacency_observation_check(PuzzleParams(k, n))
            assert r.passed, (k, n, r.counterexample)


def test_c08_three_pegs(criterion):
    criterion("8  H_n^3: unique corner geodesics (n<=8), d = 2^n - 1 = FS(n,3) (n<=12)")
    for n in range(1, 9):
        params = PuzzleParams(3, n)
        for i, j in itertools.permutations(range(3), 2):
            assert count_geodesics(params, perfect_state(params, i), perfect_state(params, j)) == 1
    for n in range(1, 13):
        params = PuzzleParams(3, n)
        d = bfs_from(params, perfect_state(params, 0))[perfect_state(params, 1)]
        assert d == 2**n - 1 == frame_stewart_count(n, 3)


def test_c09_frame_stewart(criterion):
    entry = criterion("9  Frame-Stewart count equals BFS distance for k=4 n<=10, k=5 n<=7")
    start = time.perf_counter()
    mismatches = []
    for n in range(1, 11):
        r = compare_exact(PuzzleParams(4, n))
        if not r.equal:
            mismatches.append(r.as_dict())
    four_peg_seconds = time.perf_counter() - start
    for n in range(1, 8):
        r = compare_exact(PuzzleParams(5, n))
        if not r.equal:
            mismatches.append(r.as_dict())
    entry["note"] = f"k=4 sweep {four_peg_seconds:.1f}s"
    assert not mismatches, mismatches
    assert four_peg_seconds < 30


@pytest.mark.parametrize("k,n", [(3, 1), (3, 2), (3, 3), (4, 1), (4, 2)])
def test_c10_enumerator_soundness(criterion, k, n):
    criterion(f"10 pruned enumeration equals brute force on ({k},{n})")
    params = PuzzleParams(k, n)
    ours = {tuple(m.tolist()) for m in automorphisms(k, n)[0].members()}
    brute = set()
    for mapping in brute_force_automorphisms(adjacency_dict(k, n)):
        table = [0] * params.order
        for src, dst in mapping.items():
            table[parse_state(src, params).code] = parse_state(dst, params).code
        brute.add(tuple(table))
    assert ours == brute


def _outputs(argv, capsys, workers):
    assert run(argv + ["--workers", str(workers)]) == 0
    out = []
    for line in capsys.readouterr().out.splitlines():
        rec = json.loads(line)
        rec.pop("elapsed_ms", None)
        out.append(json.dumps(rec))
    return out


def test_c11_determinism(criterion, capsys):
    criterion("11 verify/aut/dist JSON identical across worker counts (timing excluded)")
    commands = [
        ["verify", "--k", "4", "--n", "4", "--check", "all"],
        ["verify", "--k", "3", "--n", "5", "--check", "all"],
        ["aut", "--k", "5", "--n", "3", "--json"],
        ["dist", "--k", "4", "--n", "6", "--from", "012301", "--to", "333000", "--json"],
    ]
    for argv in commands:
        ref = _outputs(argv, capsys, 1)
        for workers in (2, 4):
            assert _outputs(argv, capsys, workers) == ref, argv
