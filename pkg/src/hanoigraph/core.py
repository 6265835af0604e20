"""States, moves and degrees of the Tower of Hanoi graph H_n^k.

A state is the word a_{n-1}...a_0 where a_i is the peg holding disk i
(disk 0 is the smallest).  Every word is a legal state because the stacking
order on a peg is forced by disk size.  States are packed into the integer
sum(a_i * k**i), so disk 0 is the least significant digit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, NamedTuple

MAX_CODE_SPACE = 2**48


class HanoiError(ValueError):
    """Base class for errors raised by this package."""


class InfeasibleError(HanoiError):
    """The instance is too large for the requested operation."""


class StateParseError(HanoiError):
    pass


class IllegalMoveError(HanoiError):
    pass


@dataclass(frozen=True)
class PuzzleParams:
    """k pegs and n disks, fixing one graph H_n^k."""

    pegs: int
    disks: int
    powers: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not isinstance(self.pegs, int) or not isinstance(self.disks, int):
            raise TypeError("pegs and disks must be integers")
        if self.pegs < 3:
            raise HanoiError(f"need at least 3 pegs, got {self.pegs}")
        if self.disks < 1:
            raise HanoiError(f"need at least 1 disk, got {self.disks}")
        if self.pegs**self.disks > MAX_CODE_SPACE:
            raise InfeasibleError(
                f"{self.pegs}^{self.disks} states exceed the 2^48 packed-code limit"
            )
        object.__setattr__(
            self, "powers", tuple(self.pegs**i for i in range(self.disks))
        )

    @property
    def k(self) -> int:
        return self.pegs

    @property
    def n(self) -> int:
        return self.disks

    @property
    def order(self) -> int:
        """Number of vertices, k^n."""
        return self.pegs**self.disks


class Move(NamedTuple):
    disk: int
    from_peg: int
    to_peg: int

    def reverse(self) -> "Move":
        return Move(self.disk, self.to_peg, self.from_peg)


@dataclass(frozen=True)
class State:
    params: PuzzleParams
    code: int

    def __post_init__(self):
        if not 0 <= self.code < self.params.order:
            raise HanoiError(f"code {self.code} out of range for {self.params}")

    @classmethod
    def from_pegs(cls, params: PuzzleParams, pegs_by_disk) -> "State":
        """Build a state from a sequence indexed by disk (entry i = a_i)."""
        pegs_by_disk = list(pegs_by_disk)
        if len(pegs_by_disk) != params.disks:
            raise HanoiError(
                f"expected {params.disks} digits, got {len(pegs_by_disk)}"
            )
        code = 0
        for a, p in zip(pegs_by_disk, params.powers):
            if not 0 <= a < params.pegs:
                raise HanoiError(f"peg {a} out of range for k={params.pegs}")
            code += a * p
        return cls(params, code)

    @classmethod
    def from_digits(cls, params: PuzzleParams, digits) -> "State":
        """Build a state from the written order a_{n-1}...a_0."""
        return cls.from_pegs(params, list(digits)[::-1])

    def peg_of(self, disk: int) -> int:
        return (self.code // self.params.powers[disk]) % self.params.pegs

    @property
    def pegs_by_disk(self) -> tuple:
        k, c = self.params.pegs, self.code
        out = []
        for _ in range(self.params.disks):
            c, a = divmod(c, k)
            out.append(a)
        return tuple(out)

    @property
    def digits(self) -> tuple:
        """Digits in written order a_{n-1}...a_0."""
        return self.pegs_by_disk[::-1]

    def __str__(self) -> str:
        return render_state(self)


def render_state(state: State) -> str:
    if state.params.pegs <= 10:
        return "".join(str(a) for a in state.digits)
    return ",".join(f"{a:02d}" for a in state.digits)


def parse_state(text: str, params: PuzzleParams) -> State:
    """Parse the digit word a_{n-1}...a_0.

    For k <= 10 the word is n contiguous digits; above that it is n
    comma-separated decimal values.
    """
    text = text.strip()
    parts = list(text) if params.pegs <= 10 else text.split(",")
    values = []
    for part in parts:
        part = part.strip()
        if not part.isdigit():
            raise StateParseError(f"malformed digit or separator {part!r} in {text!r}")
        value = int(part)
        if value >= params.pegs:
            raise StateParseError(f"digit {value} >= k={params.pegs} in {text!r}")
        values.append(value)
    if len(values) != params.disks:
        raise StateParseError(
            f"expected {params.disks} digits, got {len(values)} in {text!r}"
        )
    return State.from_digits(params, values)


def perfect_state(params: PuzzleParams, peg: int) -> State:
    if not 0 <= peg < params.pegs:
        raise HanoiError(f"peg {peg} out of range for k={params.pegs}")
    return State(params, peg * (params.order - 1) // (params.pegs - 1))


def corner_codes(params: PuzzleParams) -> list:
    unit = (params.order - 1) // (params.pegs - 1)
    return [i * unit for i in range(params.pegs)]


def is_corner(state: State) -> bool:
    return len(set(state.pegs_by_disk)) == 1


def iter_states(params: PuzzleParams) -> Iterator[State]:
    for code in range(params.order):
        yield State(params, code)


def topmost_profile(state: State) -> tuple:
    """Per peg, the smallest disk on it, or None for an empty peg."""
    top: list = [None] * state.params.pegs
    for disk, peg in enumerate(state.pegs_by_disk):
        if top[peg] is None:
            top[peg] = disk
    return tuple(top)


def occupied_pegs(state: State) -> int:
    return sum(t is not None for t in topmost_profile(state))


def legal_moves(state: State) -> list:
    """All legal moves, ordered by moving disk then destination peg."""
    top = topmost_profile(state)
    moves = []
    for disk in sorted(t for t in top if t is not None):
        src = state.peg_of(disk)
        for dst in range(state.params.pegs):
            if dst != src and (top[dst] is None or top[dst] > disk):
                moves.append(Move(disk, src, dst))
    return moves


def check_move(state: State, move: Move) -> None:
    params = state.params
    disk, src, dst = move
    if not 0 <= disk < params.disks:
        raise IllegalMoveError(f"disk {disk} out of range")
    if not (0 <= src < params.pegs and 0 <= dst < params.pegs):
        raise IllegalMoveError(f"peg out of range in {move}")
    if src == dst:
        raise IllegalMoveError(f"source and destination coincide in {move}")
    if state.peg_of(disk) != src:
        raise IllegalMoveError(f"disk {disk} is not on peg {src} in {state}")
    top = topmost_profile(state)
    if top[src] != disk:
        raise IllegalMoveError(f"disk {disk} is not topmost on peg {src} in {state}")
    if top[dst] is not None and top[dst] < disk:
        raise IllegalMoveError(
            f"disk {disk} cannot go onto smaller disk {top[dst]} on peg {dst} in {state}"
        )


def apply_move(state: State, move: Move) -> State:
    check_move(state, move)
    delta = (move.to_peg - move.from_peg) * state.params.powers[move.disk]
    return State(state.params, state.code + delta)


def degree_closed_form(k: int, m: int) -> int:
    """Degree of a state with m occupied pegs."""
    return m * (k - 1) - m * (m - 1) // 2


def degree(state: State) -> int:
    return len(legal_moves(state))


def substructure_index(state: State) -> int:
    """Peg holding the largest disk; the state lies in substructure [a_{n-1}]."""
    return state.peg_of(state.params.disks - 1)
