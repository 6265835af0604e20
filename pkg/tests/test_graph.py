import json
import re

import numpy as np
import pytest

from hanoigraph.core import InfeasibleError, PuzzleParams, State, iter_states, parse_state, render_state
from hanoigraph.graph import (
    adjacency,
    degree_scan,
    degrees,
    edge_count,
    edge_matrix,
    expand,
    expand_parallel,
    export_adjlist,
    export_dot,
    neighbors,
    vertex_count,
)
from hanoigraph.metric import bfs_from

from oracles import adjacency_dict


def names(states):
    return sorted(render_state(s) for s in states)


def test_neighbors_examples():
    p3 = PuzzleParams(3, 3)
    assert names(neighbors(parse_state("000", p3))) == ["001", "002"]
    assert "000" in names(neighbors(parse_state("001", p3)))
    fig2 = parse_state("03112333", PuzzleParams(4, 8))
    assert "03102333" in names(neighbors(fig2))


@pytest.mark.parametrize("k,n,count", [(3, 3, 27), (4, 8, 65536), (5, 1, 5)])
def test_vertex_count(k, n, count):
    assert vertex_count(PuzzleParams(k, n)) == count


# frozen from the stack oracle: sum of neighbor-list lengths / 2
@pytest.mark.parametrize("k,n,edges", [(3, 1, 3), (3, 2, 12), (3, 3, 39)])
def test_edge_count(k, n, edges):
    assert edge_count(PuzzleParams(k, n)) == edges


@pytest.mark.parametrize("n", range(1, 8))
def test_edge_count_three_pegs_closed_form(n):
    assert edge_count(PuzzleParams(3, n)) == 3 * (3**n - 1) // 2


@pytest.mark.parametrize("k,n", [(3, 1), (3, 4), (4, 3), (5, 3), (6, 2)])
def test_bulk_expansion_matches_oracle(k, n):
    params = PuzzleParams(k, n)
    oracle = adjacency_dict(k, n)
    adj = adjacency(params)
    for v in range(params.order):
        word = render_state(State(params, v))
        assert names(State(params, int(w)) for w in adj.row(v)) == oracle[word]


@pytest.mark.parametrize("workers", [2, 3, 7])
def test_parallel_expansion_identical(workers):
    params = PuzzleParams(4, 5)
    codes = np.arange(0, params.order, 3, dtype=np.int64)
    ref = expand(params, codes)
    par = expand_parallel(params, codes, workers)
    for a, b in zip(ref, par):
        assert np.array_equal(a, b)


def test_neighbors_distinct_and_match_degree():
    params = PuzzleParams(4, 4)
    deg = degrees(params)
    for s in iter_states(params):
        nb = neighbors(s)
        assert len(set(nb)) == len(nb) == deg[s.code]


def test_edge_matrix_k3():
    m = edge_matrix(PuzzleParams(3, 1))
    assert np.array_equal(m, np.ones((3, 3)) - np.eye(3))


@pytest.mark.parametrize("k,n", [(3, 2), (3, 4), (4, 2), (4, 4)])
def test_edge_matrix_invariants(k, n):
    params = PuzzleParams(k, n)
    m = edge_matrix(params)
    assert (m == m.T).all()
    assert (np.diag(m) == 0).all()
    assert m.max() <= 1
    assert np.array_equal(m.sum(axis=1), degrees(params))
    for i in range(k):
        corner = parse_state(str(i) * n, params)
        assert m[corner.code].sum() == k - 1
    for s in iter_states(params):
        row = set(np.flatnonzero(m[s.code]).tolist())
        assert row == {t.code for t in neighbors(s)}


def test_edge_matrix_3_2_row_sums():
    assert set(edge_matrix(PuzzleParams(3, 2)).sum(axis=1).tolist()) == {2, 3}


def test_explicit_cap():
    with pytest.raises(InfeasibleError):
        edge_matrix(PuzzleParams(3, 10))
    with pytest.raises(InfeasibleError):
        export_dot(PuzzleParams(4, 8))


@pytest.mark.parametrize("k,n", [(3, 5), (4, 4), (5, 3)])
def test_handshake_and_connectivity(k, n):
    params = PuzzleParams(k, n)
    assert 2 * edge_count(params) == degrees(params).sum()
    table = bfs_from(params, State(params, 0))
    assert table.dist.max() < 65535


def _dot_edges(text):
    return re.findall(r'"([^"]+)" -- "([^"]+)"', text)


def test_dot_k3_n1():
    text = export_dot(PuzzleParams(3, 1))
    assert text.startswith("graph ")
    for label in "012":
        assert f'"{label}" [label="{label}"' in text
    assert len(_dot_edges(text)) == 3


def test_dot_k3_n3():
    text = export_dot(PuzzleParams(3, 3))
    assert len(re.findall(r"\[label=", text)) == 27
    assert len(_dot_edges(text)) == 39


def test_dot_substructure_colors():
    text = export_dot(PuzzleParams(3, 2), color_substructures=True)
    colors = re.findall(r'"(\d\d)" \[label="\d\d", style=filled, fillcolor="([^"]+)"', text)
    by_color = {}
    for label, color in colors:
        by_color.setdefault(color, set()).add(label[0])
    assert len(by_color) == 3
    assert all(len(v) == 1 for v in by_color.values())
    assert sorted(len([l for l, c in colors if c == col]) for col in by_color) == [3, 3, 3]


def test_adjlist_json_lines():
    lines = export_adjlist(PuzzleParams(3, 2)).splitlines()
    assert len(lines) == 9
    records = [json.loads(line) for line in lines]
    oracle = adjacency_dict(3, 2)
    for rec in records:
        assert sorted(rec["nbrs"]) == oracle[rec["v"]]


def test_degree_scan_record():
    r = degree_scan(PuzzleParams(3, 3))
    assert r.passed and r.counterexample is None
    assert r.details["degree_histogram"] == {2: 3, 3: 24}
