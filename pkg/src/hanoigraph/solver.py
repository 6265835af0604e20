"""Frame-Stewart move counts and plans, checked against exact BFS distances.

FS(0, k) = 0, FS(1, k) = 1, FS(n, 3) = 2^n - 1 and otherwise
FS(n, k) = min over 1 <= t < n of 2 FS(t, k) + FS(n - t, k - 1),
taking the smallest minimizing t.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .core import (
    HanoiError,
    IllegalMoveError,
    Move,
    PuzzleParams,
    State,
    apply_move,
    corner_codes,
    perfect_state,
    render_state,
)
from .metric import bfs_from

_columns: dict = {}  # k -> [(FS(m, k), split) for m = 0, 1, ...]


def frame_stewart_split(n: int, k: int) -> tuple:
    """Return (FS(n, k), t) where t is the smallest optimal split (0 when n <= 1)."""
    if n < 0 or k < 3:
        raise HanoiError(f"Frame-Stewart needs n >= 0 and k >= 3, got n={n}, k={k}")
    if k == 3:
        return (2**n - 1, max(n - 1, 0))
    column = _columns.setdefault(k, [(0, 0), (1, 0)])
    while len(column) <= n:
        m = len(column)
        column.append(min(
            (2 * column[t][0] + frame_stewart_split(m - t, k - 1)[0], t) for t in range(1, m)
        ))
    return column[n]


def frame_stewart_count(n: int, k: int) -> int:
    return frame_stewart_split(n, k)[0]


@dataclass
class MovePlan:
    params: PuzzleParams
    start: State
    moves: list

    @property
    def claimed_length(self) -> int:
        return len(self.moves)

    def to_jsonl(self) -> str:
        return "".join(
            json.dumps({"step": i, "disk": m.disk, "from": m.from_peg, "to": m.to_peg}) + "\n"
            for i, m in enumerate(self.moves)
        )


def _plan(lo: int, count: int, src: int, dst: int, pegs: tuple, out: list) -> None:
    """Move disks lo..lo+count-1 (a tower, smallest on top) from src to dst using ``pegs``."""
    if count == 0:
        return
    if count == 1:
        out.append(Move(lo, src, dst))
        return
    k = len(pegs)
    _, t = frame_stewart_split(count, k)
    spare = min(p for p in pegs if p not in (src, dst))
    if k == 3:
        _plan(lo, count - 1, src, spare, pegs, out)
        out.append(Move(lo + count - 1, src, dst))
        _plan(lo, count - 1, spare, dst, pegs, out)
        return
    _plan(lo, t, src, spare, pegs, out)
    _plan(lo + t, count - t, src, dst, tuple(p for p in pegs if p != spare), out)
    _plan(lo, t, spare, dst, pegs, out)


def frame_stewart_plan(params: PuzzleParams, from_peg: int, to_peg: int) -> MovePlan:
    k = params.pegs
    if not (0 <= from_peg < k and 0 <= to_peg < k) or from_peg == to_peg:
        raise HanoiError(f"invalid pegs {from_peg} -> {to_peg} for k={k}")
    moves: list = []
    _plan(0, params.disks, from_peg, to_peg, tuple(range(k)), moves)
    return MovePlan(params, perfect_state(params, from_peg), moves)


class PlanReplayError(IllegalMoveError):
    def __init__(self, step: int, state: State, move: Move, reason: str):
        super().__init__(f"step {step}: {move} illegal in {render_state(state)}: {reason}")
        self.step = step
        self.state = state
        self.move = move


def replay_plan(params: PuzzleParams, start: State, plan) -> State:
    moves = plan.moves if isinstance(plan, MovePlan) else list(plan)
    state = start
    for step, move in enumerate(moves):
        try:
            state = apply_move(state, Move(*move))
        except IllegalMoveError as exc:
            raise PlanReplayError(step, state, Move(*move), str(exc)) from None
    return state


@dataclass
class ComparisonReport:
    params: PuzzleParams
    from_peg: int
    to_peg: int
    fs_count: int
    exact_distance: int

    @property
    def equal(self) -> bool:
        return self.fs_count == self.exact_distance

    def as_dict(self) -> dict:
        return {"k": self.params.pegs, "n": self.params.disks, "from": self.from_peg,
                "to": self.to_peg, "fs_count": self.fs_count,
                "exact_distance": self.exact_distance, "equal": self.equal}


def compare_exact(params: PuzzleParams, from_peg: int = 0, to_peg: int = 1,
                  workers: int = 1) -> ComparisonReport:
    if from_peg == to_peg:
        raise HanoiError("from and to pegs must differ")
    table = bfs_from(params, perfect_state(params, from_peg), workers)
    exact = table[corner_codes(params)[to_peg]]
    return ComparisonReport(params, from_peg, to_peg,
                            frame_stewart_count(params.disks, params.pegs), exact)
