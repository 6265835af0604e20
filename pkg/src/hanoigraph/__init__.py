"""Tower of Hanoi graphs H_n^k: implicit graph, exact metric, automorphism
group enumeration and Frame-Stewart plans."""

from .core import (
    HanoiError,
    IllegalMoveError,
    InfeasibleError,
    Move,
    PuzzleParams,
    State,
    StateParseError,
    apply_move,
    degree,
    is_corner,
    legal_moves,
    parse_state,
    perfect_state,
    render_state,
    substructure_index,
    topmost_profile,
)

__version__ = "0.1.0"
