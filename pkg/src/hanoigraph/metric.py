"""Exact hop distances, geodesic DAGs and the corner-distance checks."""

from __future__ import annotations

import time
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .core import (
    HanoiError,
    InfeasibleError,
    PuzzleParams,
    State,
    corner_codes,
    perfect_state,
    render_state,
)
from .graph import expand, expand_parallel, require_exhaustive, top_digits
from .report import CheckResult

UNSEEN = np.iinfo(np.uint16).max
DEFAULT_SEARCH_BUDGET = 8_000_000


class SearchBudgetExceeded(InfeasibleError):
    pass


@dataclass
class DistanceTable:
    params: PuzzleParams
    source: int
    dist: np.ndarray  # uint16, indexed by packed code

    def __getitem__(self, state) -> int:
        code = state.code if isinstance(state, State) else int(state)
        return int(self.dist[code])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, DistanceTable)
            and self.params == other.params
            and self.source == other.source
            and np.array_equal(self.dist, other.dist)
        )

    @property
    def eccentricity(self) -> int:
        return int(self.dist.max())

    def layers(self) -> list:
        """Vertex codes grouped by distance, each layer sorted."""
        order = np.argsort(self.dist, kind="stable")
        counts = np.bincount(self.dist, minlength=self.eccentricity + 1)
        return np.split(order, np.cumsum(counts)[:-1])


def bfs_from(params: PuzzleParams, source, workers: int = 1) -> DistanceTable:
    """Breadth-first search over all k^n states from ``source``."""
    require_exhaustive(params, "bfs_from")
    src = source.code if isinstance(source, State) else int(source)
    dist = np.full(params.order, UNSEEN, dtype=np.uint16)
    dist[src] = 0
    frontier = np.array([src], dtype=np.int64)
    level = 0
    while len(frontier):
        if level + 1 >= UNSEEN:
            raise HanoiError("distance exceeds the 16-bit table width")
        _, nbrs, _ = expand_parallel(params, frontier, workers)
        nbrs = np.unique(nbrs[dist[nbrs] == UNSEEN])
        level += 1
        dist[nbrs] = level
        frontier = nbrs
    if (dist == UNSEEN).any():
        raise HanoiError("graph is not connected")
    return DistanceTable(params, src, dist)


@lru_cache(maxsize=64)
def corner_table(params: PuzzleParams, peg: int) -> DistanceTable:
    return bfs_from(params, perfect_state(params, peg))


def corner_tables(params: PuzzleParams) -> np.ndarray:
    """Array of shape (k, N): row i is the distance to the perfect state on peg i."""
    return np.stack([corner_table(params, i).dist for i in range(params.pegs)])


def distance(params: PuzzleParams, u: State, v: State,
             budget: int = DEFAULT_SEARCH_BUDGET) -> int:
    """Bidirectional BFS; expands the smaller frontier, the source side on ties.

    ``budget`` bounds the number of states held across both searches.
    """
    if u.code == v.code:
        return 0
    seen = ({u.code: 0}, {v.code: 0})
    frontiers = [np.array([u.code], dtype=np.int64), np.array([v.code], dtype=np.int64)]
    depth = [0, 0]
    while len(frontiers[0]) and len(frontiers[1]):
        side = 0 if len(frontiers[0]) <= len(frontiers[1]) else 1
        mine, other = seen[side], seen[1 - side]
        _, nbrs, _ = expand(params, frontiers[side])
        nbrs = np.unique(nbrs)
        depth[side] += 1
        best = None
        fresh = []
        for w in nbrs.tolist():
            if w in other:
                total = depth[side] + other[w]
                if best is None or total < best:
                    best = total
            if w not in mine:
                mine[w] = depth[side]
                fresh.append(w)
        if best is not None:
            return best
        if len(mine) + len(other) > budget:
            raise SearchBudgetExceeded(
                f"bidirectional search exceeded {budget} states"
            )
        frontiers[side] = np.array(fresh, dtype=np.int64)
    raise HanoiError("no path found; graph should be connected")


class GeodesicDag:
    """Shortest-path predecessor structure from one source.

    Predecessors of v are the neighbors one step closer to the source; they
    are derived from the distance table on demand.
    """

    def __init__(self, table: DistanceTable):
        self.table = table
        self.params = table.params
        self.source = table.source

    def predecessor_codes(self, code: int) -> list:
        d = self.table.dist
        _, nbrs, _ = expand(self.params, np.array([code], dtype=np.int64))
        if d[code] == 0:
            return []
        return sorted(int(w) for w in nbrs if d[w] == d[code] - 1)

    def predecessors(self, state: State) -> list:
        return [State(self.params, c) for c in self.predecessor_codes(state.code)]

    def walk_to_source(self, state: State) -> list:
        """One geodesic from ``state`` back to the source, always taking the lowest code."""
        path = [state.code]
        while path[-1] != self.source:
            path.append(self.predecessor_codes(path[-1])[0])
        return [State(self.params, c) for c in path]


def geodesic_dag(params: PuzzleParams, source: State) -> GeodesicDag:
    return GeodesicDag(bfs_from(params, source))


def _interval(table: DistanceTable, target: int) -> list:
    """Layers of the vertices lying on some geodesic source -> target."""
    params = table.params
    d = table.dist
    layers = [np.array([target], dtype=np.int64)]
    for level in range(int(d[target]), 0, -1):
        _, nbrs, _ = expand(params, layers[-1])
        layers.append(np.unique(nbrs[d[nbrs] == level - 1]))
    return layers[::-1]


def count_geodesics(params: PuzzleParams, u: State, v: State) -> int:
    """Number of distinct shortest u -> v paths (exact integer)."""
    table = bfs_from(params, u)
    layers = _interval(table, v.code)
    counts = {u.code: 1}
    for layer in layers[1:]:
        src, nbrs, _ = expand(params, layer)
        nxt = dict.fromkeys(layer.tolist(), 0)
        for s, w in zip(src.tolist(), nbrs.tolist()):
            c = counts.get(w)
            if c is not None:
                nxt[int(layer[s])] += c
        counts = nxt
    return counts[v.code]


@lru_cache(maxsize=64)
def largest_disk_move_bounds(params: PuzzleParams, corner_peg: int):
    """Min and max number of largest-disk moves over geodesics from a corner.

    Returns two arrays indexed by code, computed by dynamic programming over
    the geodesic DAG layer by layer.
    """
    table = corner_table(params, corner_peg)
    d = table.dist.astype(np.int64)
    top = top_digits(params, np.arange(params.order, dtype=np.int64))
    big = np.iinfo(np.int64).max // 2
    lo = np.full(params.order, big, dtype=np.int64)
    hi = np.full(params.order, -1, dtype=np.int64)
    lo[table.source] = hi[table.source] = 0
    for level, layer in enumerate(table.layers()):
        if level == 0:
            continue
        src, nbrs, _ = expand(params, layer)
        keep = d[nbrs] == level - 1
        v = layer[src[keep]]
        p = nbrs[keep]
        step = (top[v] != top[p]).astype(np.int64)
        np.minimum.at(lo, v, lo[p] + step)
        np.maximum.at(hi, v, hi[p] + step)
    return lo, hi


def largest_disk_move_range(params: PuzzleParams, corner_peg: int, target: State):
    if not 0 <= corner_peg < params.pegs:
        raise HanoiError(f"peg {corner_peg} out of range")
    lo, hi = largest_disk_move_bounds(params, corner_peg)
    return int(lo[target.code]), int(hi[target.code])


def largest_disk_check(params: PuzzleParams) -> CheckResult:
    """Every geodesic from a corner moves the largest disk 0 times inside its
    substructure and exactly once outside it."""
    start = time.perf_counter()
    top = top_digits(params, np.arange(params.order, dtype=np.int64))
    counterexample = None
    for i in range(params.pegs):
        lo, hi = largest_disk_move_bounds(params, i)
        expected = (top != i).astype(np.int64)
        bad = np.flatnonzero((lo != expected) | (hi != expected))
        if len(bad):
            v = int(bad[0])
            counterexample = {"corner": i, "vertex": render_state(State(params, v)),
                              "range": [int(lo[v]), int(hi[v])], "expected": int(expected[v])}
            break
    return CheckResult("lemma4", params.pegs, params.disks, counterexample is None,
                       counterexample, (time.perf_counter() - start) * 1000)


@dataclass
class NearestCornerReport:
    params: PuzzleParams
    passed: bool
    counterexample: Optional[tuple] = None  # (v, i, j)


def nearest_corner_report(params: PuzzleParams) -> NearestCornerReport:
    """Check d(v, own corner) < d(v, other corner) for every v and other corner."""
    tables = corner_tables(params).astype(np.int64)
    codes = np.arange(params.order, dtype=np.int64)
    top = top_digits(params, codes)
    own = tables[top, codes]
    for j in range(params.pegs):
        bad = np.flatnonzero((top != j) & (own >= tables[j]))
        if len(bad):
            v = int(bad[0])
            return NearestCornerReport(params, False, (State(params, v), int(top[v]), j))
    return NearestCornerReport(params, True)


def nearest_corner_check(params: PuzzleParams) -> CheckResult:
    start = time.perf_counter()
    report = nearest_corner_report(params)
    counterexample = None
    if report.counterexample:
        v, i, j = report.counterexample
        counterexample = {"vertex": render_state(v), "own": i, "other": j}
    return CheckResult("lemma5", params.pegs, params.disks, report.passed,
                       counterexample, (time.perf_counter() - start) * 1000)


def corner_distance(params: PuzzleParams, i: int, j: int) -> int:
    return corner_table(params, i)[corner_codes(params)[j]]
