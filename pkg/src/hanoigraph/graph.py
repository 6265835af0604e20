"""H_n^k as an implicit undirected graph over packed state codes.

Bulk operations work on numpy arrays of codes.  Vertex order everywhere is
packed-code order.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import (
    InfeasibleError,
    PuzzleParams,
    State,
    apply_move,
    corner_codes,
    legal_moves,
    render_state,
)
from .report import CheckResult

EXPLICIT_CAP = 20_000
EXHAUSTIVE_CAP = 2**25


def require_exhaustive(params: PuzzleParams, what: str = "exhaustive scan") -> None:
    if params.order > EXHAUSTIVE_CAP:
        raise InfeasibleError(
            f"{what} needs all {params.order} states of H_{params.disks}^{params.pegs}; "
            f"cap is {EXHAUSTIVE_CAP}"
        )


def require_explicit(params: PuzzleParams, what: str = "explicit materialization") -> None:
    if params.order > EXPLICIT_CAP:
        raise InfeasibleError(
            f"{what} refuses {params.order} vertices; cap is {EXPLICIT_CAP}"
        )


def neighbors(state: State) -> list:
    return [apply_move(state, m) for m in legal_moves(state)]


def vertex_count(params: PuzzleParams) -> int:
    return params.order


def digit_rows(params: PuzzleParams, codes: np.ndarray) -> np.ndarray:
    """Array of shape (n, len(codes)); row i holds a_i."""
    powers = np.array(params.powers, dtype=np.int64)
    return (codes[None, :] // powers[:, None]) % params.pegs


def top_digits(params: PuzzleParams, codes: np.ndarray) -> np.ndarray:
    return codes // params.powers[-1]


def expand(params: PuzzleParams, codes: np.ndarray):
    """Generate every edge leaving ``codes``.

    Returns ``(src, dst, disk)``: ``src`` indexes into ``codes``, ``dst`` is
    the neighbor code and ``disk`` the disk moved.  Disk i may move to peg q
    iff no smaller disk sits on its own peg or on q.
    """
    codes = np.asarray(codes, dtype=np.int64)
    k = params.pegs
    digits = digit_rows(params, codes)
    occupied = np.zeros(len(codes), dtype=np.int64)  # peg bitmask of smaller disks
    index = np.arange(len(codes), dtype=np.int64)
    srcs, dsts, disks = [], [], []
    for i, power in enumerate(params.powers):
        a = digits[i]
        own_bit = np.left_shift(1, a)
        free_own = (occupied & own_bit) == 0
        for q in range(k):
            ok = free_own & (a != q) & ((occupied & (1 << q)) == 0)
            if ok.any():
                idx = index[ok]
                srcs.append(idx)
                dsts.append(codes[ok] + (q - a[ok]) * power)
                disks.append(np.full(len(idx), i, dtype=np.int64))
        occupied |= own_bit
    if not srcs:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty, empty
    return np.concatenate(srcs), np.concatenate(dsts), np.concatenate(disks)


def expand_parallel(params: PuzzleParams, codes: np.ndarray, workers: int = 1):
    """``expand`` over chunks of ``codes``; output is identical for any worker count."""
    if workers <= 1 or len(codes) < 2 * workers:
        return expand(params, codes)
    bounds = np.linspace(0, len(codes), workers + 1).astype(np.int64)
    chunks = [(lo, codes[lo:hi]) for lo, hi in zip(bounds[:-1], bounds[1:])]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(lambda c: expand(params, c[1]), chunks))
    srcs = [p[0] + lo for (lo, _), p in zip(chunks, parts)]
    # restore the single-chunk ordering: by disk, then destination peg, then source
    src = np.concatenate(srcs)
    dst = np.concatenate([p[1] for p in parts])
    disk = np.concatenate([p[2] for p in parts])
    powers = np.array(params.powers, dtype=np.int64)
    peg = (dst // powers[disk]) % params.pegs
    order = np.lexsort((src, peg, disk))
    return src[order], dst[order], disk[order]


@dataclass
class Adjacency:
    """CSR adjacency of the whole graph, rows in code order, columns sorted."""

    params: PuzzleParams
    indptr: np.ndarray
    indices: np.ndarray

    def row(self, code: int) -> np.ndarray:
        return self.indices[self.indptr[code] : self.indptr[code + 1]]

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def lists(self) -> list:
        return [self.row(v).tolist() for v in range(self.params.order)]


def adjacency(params: PuzzleParams) -> Adjacency:
    require_exhaustive(params, "adjacency")
    codes = np.arange(params.order, dtype=np.int64)
    src, dst, _ = expand(params, codes)
    order = np.lexsort((dst, src))
    indptr = np.zeros(params.order + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=params.order), out=indptr[1:])
    return Adjacency(params, indptr, dst[order])


def edge_keys(params: PuzzleParams) -> np.ndarray:
    """Sorted u*N+w for every directed edge (u, w)."""
    adj = adjacency(params)
    src = np.repeat(np.arange(params.order, dtype=np.int64), adj.degrees())
    return src * params.order + adj.indices


def degrees(params: PuzzleParams) -> np.ndarray:
    require_exhaustive(params, "degree scan")
    src, _, _ = expand(params, np.arange(params.order, dtype=np.int64))
    return np.bincount(src, minlength=params.order)


def occupied_counts(params: PuzzleParams, codes: np.ndarray) -> np.ndarray:
    digits = digit_rows(params, codes)
    seen = np.zeros((params.pegs, len(codes)), dtype=bool)
    for row in digits:
        seen[row, np.arange(len(codes))] = True
    return seen.sum(axis=0)


def edge_count(params: PuzzleParams) -> int:
    total = int(degrees(params).sum())
    assert total % 2 == 0, "degree sum must be even"
    return total // 2


def edge_matrix(params: PuzzleParams) -> np.ndarray:
    """Dense N x N matrix of edge multiplicities in code order."""
    require_explicit(params, "edge_matrix")
    n = params.order
    src, dst, _ = expand(params, np.arange(n, dtype=np.int64))
    matrix = np.zeros((n, n), dtype=np.uint8)
    np.add.at(matrix, (src, dst), 1)
    return matrix


def degree_scan(params: PuzzleParams) -> CheckResult:
    """Corners have degree k-1, all else >= 2k-3, and the closed form holds."""
    start = time.perf_counter()
    k = params.pegs
    codes = np.arange(params.order, dtype=np.int64)
    deg = degrees(params)
    m = occupied_counts(params, codes)
    closed = m * (k - 1) - m * (m - 1) // 2
    corners = np.zeros(params.order, dtype=bool)
    corners[corner_codes(params)] = True
    counterexample = None
    bad = np.flatnonzero(deg != closed)
    if len(bad):
        v = int(bad[0])
        counterexample = {"vertex": render_state(State(params, v)), "degree": int(deg[v]),
                          "closed_form": int(closed[v]), "rule": "closed_form"}
    else:
        low = np.flatnonzero(corners & (deg != k - 1))
        if len(low):
            v = int(low[0])
            counterexample = {"vertex": render_state(State(params, v)), "degree": int(deg[v]),
                              "rule": "corner_degree"}
        else:
            high = np.flatnonzero(~corners & (deg < 2 * k - 3))
            if len(high):
                v = int(high[0])
                counterexample = {"vertex": render_state(State(params, v)),
                                  "degree": int(deg[v]), "rule": "non_corner_degree"}
    histogram = {int(d): int(c) for d, c in zip(*np.unique(deg, return_counts=True))}
    return CheckResult(
        "lemma2", params.pegs, params.disks, counterexample is None, counterexample,
        elapsed_ms=(time.perf_counter() - start) * 1000,
        details={"degree_histogram": histogram},
    )


PALETTE = ["#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00",
           "#ffff33", "#a65628", "#f781bf", "#999999", "#66c2a5"]


def export_dot(params: PuzzleParams, color_substructures: bool = False) -> str:
    require_explicit(params, "export_dot")
    adj = adjacency(params)
    lines = [f'graph "H_{params.disks}^{params.pegs}" {{']
    for v in range(params.order):
        label = render_state(State(params, v))
        attrs = f'label="{label}"'
        if color_substructures:
            peg = v // params.powers[-1]
            attrs += f', style=filled, fillcolor="{PALETTE[peg % len(PALETTE)]}"'
        lines.append(f'  "{label}" [{attrs}];')
    for u in range(params.order):
        for w in adj.row(u):
            if u < w:
                lines.append(
                    f'  "{render_state(State(params, u))}" -- "{render_state(State(params, int(w)))}";'
                )
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_adjlist(params: PuzzleParams) -> str:
    """One JSON object per line: {"v": state, "nbrs": [state, ...]}."""
    require_explicit(params, "adjacency export")
    adj = adjacency(params)
    out = []
    for v in range(params.order):
        out.append(json.dumps({
            "v": render_state(State(params, v)),
            "nbrs": [render_state(State(params, int(w))) for w in adj.row(v)],
        }))
    return "\n".join(out) + "\n"
