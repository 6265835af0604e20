"""Automorphisms of H_n^k.

``enumerate_automorphisms`` searches for every adjacency-preserving bijection
without assuming they all come from peg permutations; the checks below then
confirm the group is S_k acting on the corners.
"""

from __future__ import annotations

import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .core import HanoiError, PuzzleParams, State, corner_codes, render_state
from .graph import (
    EXPLICIT_CAP,
    adjacency,
    degrees,
    digit_rows,
    edge_keys,
    require_exhaustive,
    top_digits,
)
from .metric import corner_tables
from .report import CheckResult


class EnumerationError(HanoiError):
    """The automorphism search or the group axioms produced an inconsistency."""


def check_permutation(sigma, k: int) -> tuple:
    sigma = tuple(int(s) for s in sigma)
    if sorted(sigma) != list(range(k)):
        raise HanoiError(f"{sigma} is not a permutation of 0..{k - 1}")
    return sigma


def induced_map(sigma, params: PuzzleParams) -> np.ndarray:
    """Vertex map g_sigma: apply sigma to every digit.  Entry c is the image of code c."""
    sigma = np.array(check_permutation(sigma, params.pegs), dtype=np.int64)
    codes = np.arange(params.order, dtype=np.int64)
    digits = digit_rows(params, codes)
    powers = np.array(params.powers, dtype=np.int64)
    return (sigma[digits] * powers[:, None]).sum(axis=0)


def induced_image(sigma, state: State) -> State:
    sigma = check_permutation(sigma, state.params.pegs)
    return State.from_pegs(state.params, [sigma[a] for a in state.pegs_by_disk])


@dataclass
class AutomorphismCheck:
    passed: bool
    witness: Optional[dict] = None


def is_automorphism(mapping, params: PuzzleParams, keys: Optional[np.ndarray] = None
                    ) -> AutomorphismCheck:
    """Bijectivity plus edge preservation.

    For a bijection on a finite graph, sending every edge to an edge already
    forces non-edges to non-edges, so only edges are scanned.
    """
    require_exhaustive(params, "is_automorphism")
    mapping = np.asarray(mapping, dtype=np.int64)
    n = params.order
    if mapping.shape != (n,):
        return AutomorphismCheck(False, {"reason": "wrong length", "length": int(mapping.size)})
    if mapping.min() < 0 or mapping.max() >= n:
        return AutomorphismCheck(False, {"reason": "image out of range"})
    counts = np.bincount(mapping, minlength=n)
    if (counts != 1).any():
        w = int(np.flatnonzero(counts > 1)[0])
        pre = np.flatnonzero(mapping == w)[:2]
        return AutomorphismCheck(False, {
            "reason": "collision",
            "vertices": [render_state(State(params, int(x))) for x in pre],
            "image": render_state(State(params, w)),
        })
    if keys is None:
        keys = edge_keys(params)
    u, w = np.divmod(keys, n)
    mapped = mapping[u] * n + mapping[w]
    pos = np.searchsorted(keys, mapped)
    pos[pos == len(keys)] = 0
    bad = np.flatnonzero(keys[pos] != mapped)
    if len(bad):
        e = int(bad[0])
        return AutomorphismCheck(False, {
            "reason": "edge not preserved",
            "edge": [render_state(State(params, int(u[e]))), render_state(State(params, int(w[e])))],
            "image": [render_state(State(params, int(mapping[u[e]]))),
                      render_state(State(params, int(mapping[w[e]])))],
        })
    return AutomorphismCheck(True)


def corner_fingerprints(params: PuzzleParams) -> np.ndarray:
    """Array of shape (N, k): distances from each vertex to every corner."""
    return corner_tables(params).T.copy()


def corner_fingerprint(params: PuzzleParams, v: State) -> tuple:
    return tuple(int(x) for x in corner_tables(params)[:, v.code])


def search_order(params: PuzzleParams) -> np.ndarray:
    """Vertices by (distance from the corner on peg 0, code)."""
    d0 = corner_tables(params)[0]
    return np.lexsort((np.arange(params.order), d0))


def check_corner_dichotomy(params: PuzzleParams, deg: np.ndarray) -> None:
    low = set(np.flatnonzero(deg == params.pegs - 1).tolist())
    if low != set(corner_codes(params)) or (deg < params.pegs - 1).any():
        raise EnumerationError(
            "degree-(k-1) vertices are not exactly the perfect states; "
            "corner-based enumeration is unsound here"
        )


class _Search:
    """Backtracking extension of a corner assignment to a full vertex map."""

    def __init__(self, params: PuzzleParams, use_fingerprints: bool = True):
        self.params = params
        self.adj = adjacency(params).lists()
        self.adjset = [set(r) for r in self.adj]
        self.deg = degrees(params)
        self.order = [int(v) for v in search_order(params)]
        self.corners = corner_codes(params)
        self.use_fingerprints = use_fingerprints
        if use_fingerprints:
            self.fp = corner_fingerprints(params)
            self.groups: dict = {}
            for v in range(params.order):
                self.groups.setdefault(self.fp[v].tobytes(), []).append(v)

    def extensions(self, sigma) -> list:
        """All automorphisms sending corner i to corner sigma[i]."""
        params = self.params
        n = params.order
        img = [-1] * n
        pre = [-1] * n
        for i, c in enumerate(self.corners):
            w = self.corners[sigma[i]]
            if self.deg[c] != self.deg[w]:
                return []
            img[c], pre[w] = w, c
        order = [v for v in self.order if img[v] == -1]
        if self.use_fingerprints:
            target_fp = np.empty_like(self.fp)
            target_fp[:, list(sigma)] = self.fp
        else:
            target_fp = None

        adj, adjset, deg = self.adj, self.adjset, self.deg

        def candidates(v):
            if target_fp is not None:
                pool = self.groups.get(target_fp[v].tobytes(), [])
            else:
                pool = range(n)
            out = []
            for w in pool:
                if pre[w] != -1 or deg[w] != deg[v]:
                    continue
                aw = adjset[w]
                if any(img[u] != -1 and img[u] not in aw for u in adj[v]):
                    continue
                av = adjset[v]
                if any(pre[x] != -1 and pre[x] not in av for x in adj[w]):
                    continue
                out.append(w)
            return out

        found = []
        if not order:
            found.append(np.array(img, dtype=np.int64))
            return found
        depth = len(order)
        cands = [None] * depth
        ptr = [0] * depth
        p = 0
        cands[0] = candidates(order[0])
        while p >= 0:
            v = order[p]
            if img[v] != -1:
                pre[img[v]] = -1
                img[v] = -1
            if ptr[p] < len(cands[p]):
                w = cands[p][ptr[p]]
                ptr[p] += 1
                img[v], pre[w] = w, v
                if p + 1 == depth:
                    found.append(np.array(img, dtype=np.int64))
                else:
                    p += 1
                    cands[p] = candidates(order[p])
                    ptr[p] = 0
            else:
                p -= 1
        return found


def _search_roots(args):
    params, sigmas = args
    search = _Search(params)
    return [(tuple(s), m) for s in sigmas for m in search.extensions(s)]


def corner_action(mapping, params: PuzzleParams) -> tuple:
    """Permutation pi of the pegs with mapping(corner i) = corner pi(i)."""
    corners = corner_codes(params)
    index = {c: i for i, c in enumerate(corners)}
    action = []
    for c in corners:
        w = int(mapping[c])
        if w not in index:
            raise EnumerationError(f"corner {c} mapped to non-corner {w}")
        action.append(index[w])
    return tuple(action)


@dataclass
class AutomorphismSet:
    params: PuzzleParams
    corner_action: list  # one tuple per member, sorted
    maps: Optional[list] = None  # vertex tables, present up to the explicit cap
    elapsed_ms: float = 0.0

    @property
    def order(self) -> int:
        return len(self.corner_action)

    def members(self):
        if self.maps is None:
            return [induced_map(s, self.params) for s in self.corner_action]
        return self.maps


def enumerate_automorphisms(params: PuzzleParams, workers: int = 1) -> AutomorphismSet:
    """Find every automorphism of H_n^k by corner assignment and extension.

    Steps: confirm the degree-(k-1) vertices are exactly the corners, so any
    automorphism permutes them; for each of the k! corner assignments extend
    vertex by vertex (search order) choosing images whose corner-distance
    vector matches, backtracking on adjacency; verify every completed map.
    """
    require_exhaustive(params, "enumerate_automorphisms")
    start = time.perf_counter()
    deg = degrees(params)
    check_corner_dichotomy(params, deg)
    sigmas = list(itertools.permutations(range(params.pegs)))
    if workers <= 1:
        found = _search_roots((params, sigmas))
    else:
        batches = [sigmas[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            found = [x for part in pool.map(_search_roots, [(params, b) for b in batches])
                     for x in part]
    keys = edge_keys(params)
    members = []
    for sigma, mapping in found:
        check = is_automorphism(mapping, params, keys)
        if not check.passed:
            raise EnumerationError(f"search produced a non-automorphism: {check.witness}")
        action = corner_action(mapping, params)
        if action != sigma:
            raise EnumerationError(f"corner action {action} differs from root {sigma}")
        members.append((action, mapping))
    members.sort(key=lambda m: (m[0], m[1].tobytes()))
    actions = [a for a, _ in members]
    maps = [m for _, m in members]
    if params.order > EXPLICIT_CAP:
        if len(set(actions)) != len(actions):
            raise EnumerationError("corner action is not injective")
        maps = None
    return AutomorphismSet(params, actions, maps, (time.perf_counter() - start) * 1000)


@dataclass
class GroupReport:
    k: int
    n: int
    order: int
    has_identity: bool
    closed: bool
    has_inverses: bool
    homomorphism: bool
    action_injective: bool
    action_surjective: bool
    elapsed_ms: float = 0.0
    failure: Optional[str] = None

    @property
    def is_symmetric_group(self) -> bool:
        return all((self.has_identity, self.closed, self.has_inverses, self.homomorphism,
                    self.action_injective, self.action_surjective))

    def as_dict(self, timing: bool = True) -> dict:
        out = {"k": self.k, "n": self.n, "order": self.order,
               "is_symmetric_group": self.is_symmetric_group}
        if timing:
            out["elapsed_ms"] = round(self.elapsed_ms, 3)
        return out


def _compose(p, q):
    """(p o q)(i) = p[q[i]]."""
    return tuple(p[i] for i in q)


def verify_group_structure(aut: AutomorphismSet) -> GroupReport:
    """Group axioms on the vertex maps, and the corner action as an isomorphism onto S_k."""
    start = time.perf_counter()
    params = aut.params
    k = params.pegs
    maps = np.stack(aut.members())
    actions = aut.corner_action
    lookup = {m.tobytes(): idx for idx, m in enumerate(maps)}
    identity = np.arange(params.order, dtype=np.int64)
    has_identity = identity.tobytes() in lookup
    closed = homomorphism = True
    for g, row in enumerate(maps):
        # all h o g in one gather: (h o g)(v) = h[g[v]]
        composed = maps[:, row]
        for h, c in enumerate(composed):
            idx = lookup.get(c.tobytes())
            if idx is None:
                closed = False
                break
            if actions[idx] != _compose(actions[h], actions[g]):
                homomorphism = False
        if not closed:
            break
    has_inverses = True
    for row in maps:
        inv = np.empty_like(row)
        inv[row] = identity
        if inv.tobytes() not in lookup:
            has_inverses = False
            break
    injective = len(set(actions)) == len(actions)
    surjective = set(actions) == set(itertools.permutations(range(k)))
    report = GroupReport(k, params.disks, aut.order, has_identity, closed, has_inverses,
                         homomorphism, injective, surjective)
    report.elapsed_ms = aut.elapsed_ms + (time.perf_counter() - start) * 1000
    if not report.is_symmetric_group:
        names = [f for f in ("has_identity", "closed", "has_inverses", "homomorphism",
                             "action_injective", "action_surjective") if not getattr(report, f)]
        report.failure = ",".join(names)
    return report


def _elapsed(start):
    return (time.perf_counter() - start) * 1000


def theorem_check(params: PuzzleParams, aut: Optional[AutomorphismSet] = None,
                  workers: int = 1) -> CheckResult:
    start = time.perf_counter()
    aut = aut or enumerate_automorphisms(params, workers)
    report = verify_group_structure(aut)
    expected = 1
    for i in range(2, params.pegs + 1):
        expected *= i
    passed = report.is_symmetric_group and report.order == expected
    counterexample = None if passed else {"order": report.order, "failure": report.failure}
    return CheckResult("theorem", params.pegs, params.disks, passed, counterexample,
                       aut.elapsed_ms + _elapsed(start),
                       {"order": report.order, "is_symmetric_group": report.is_symmetric_group})


def induced_maps_check(params: PuzzleParams) -> CheckResult:
    """Every peg permutation induces an automorphism."""
    start = time.perf_counter()
    keys = edge_keys(params)
    counterexample = None
    for sigma in itertools.permutations(range(params.pegs)):
        check = is_automorphism(induced_map(sigma, params), params, keys)
        if not check.passed:
            counterexample = {"sigma": list(sigma), "witness": check.witness}
            break
    return CheckResult("prop1", params.pegs, params.disks, counterexample is None,
                       counterexample, _elapsed(start))


def corner_fixing_is_identity(params: PuzzleParams,
                              aut: Optional[AutomorphismSet] = None) -> CheckResult:
    """Exactly one automorphism fixes every corner, and it fixes every vertex."""
    start = time.perf_counter()
    aut = aut or enumerate_automorphisms(params)
    identity_action = tuple(range(params.pegs))
    fixing = [m for a, m in zip(aut.corner_action, aut.members()) if a == identity_action]
    counterexample = None
    if len(fixing) != 1:
        counterexample = {"corner_fixing_count": len(fixing)}
    else:
        moved = np.flatnonzero(fixing[0] != np.arange(params.order))
        if len(moved):
            v = int(moved[0])
            counterexample = {"vertex": render_state(State(params, v)),
                              "image": render_state(State(params, int(fixing[0][v])))}
    return CheckResult("prop3", params.pegs, params.disks, counterexample is None,
                       counterexample, _elapsed(start))


def substructure_preservation_check(params: PuzzleParams,
                                    aut: Optional[AutomorphismSet] = None) -> CheckResult:
    """If g fixes the corner on peg i then g maps [i] onto [i]."""
    start = time.perf_counter()
    aut = aut or enumerate_automorphisms(params)
    codes = np.arange(params.order, dtype=np.int64)
    top = top_digits(params, codes)
    counterexample = None
    for action, mapping in zip(aut.corner_action, aut.members()):
        for i in range(params.pegs):
            if action[i] != i:
                continue
            inside = codes[top == i]
            if not np.array_equal(np.sort(mapping[inside]), inside):
                counterexample = {"corner_action": list(action), "substructure": i}
                break
        if counterexample:
            break
    return CheckResult("lemma6", params.pegs, params.disks, counterexample is None,
                       counterexample, _elapsed(start))


def adjacency_observation_check(params: PuzzleParams) -> CheckResult:
    """For i != j the vertex i j...j has no neighbor in [j] and one in every other [l]."""
    start = time.perf_counter()
    if params.disks < 2:
        return CheckResult("adjacency", params.pegs, params.disks, True, None, 0.0,
                           {"skipped": "requires n >= 2"})
    require_exhaustive(params, "adjacency_observation_check")
    adj = adjacency(params)
    k = params.pegs
    lead = params.powers[-1]
    rest = (lead - 1) // (k - 1)  # code of 1...1 on the n-1 smallest disks
    counterexample = None
    for i in range(k):
        for j in range(k):
            if i == j:
                continue
            v = i * lead + j * rest
            hit = {}
            for w in adj.row(v).tolist():
                hit.setdefault(w // lead, []).append(w)
            if j in hit:
                counterexample = {"vertex": render_state(State(params, v)),
                                  "neighbor_in": j,
                                  "neighbor": render_state(State(params, hit[j][0]))}
            else:
                for l in range(k):
                    if l in (i, j):
                        continue
                    expect = l * lead + j * rest
                    if hit.get(l) != [expect]:
                        counterexample = {"vertex": render_state(State(params, v)),
                                          "missing_in": l}
                        break
            if counterexample:
                break
        if counterexample:
            break
    return CheckResult("adjacency", params.pegs, params.disks, counterexample is None,
                       counterexample, _elapsed(start))
