"""Lefschetz words in free groups: Hurwitz, cyclic and stabilization moves."""

from .moves import (
    MOVES,
    Monodromy,
    apply_moves,
    cyclic_permute,
    cyclic_permute_inverse,
    destabilize,
    hurwitz_left,
    hurwitz_right,
    stabilize,
    total_monodromy,
)
from .words import FreeWord, LefschetzWord, cyclic_reduce, free_reduce, load_word, save_word

__all__ = [
    "MOVES",
    "Monodromy",
    "apply_moves",
    "cyclic_permute",
    "cyclic_permute_inverse",
    "destabilize",
    "hurwitz_left",
    "hurwitz_right",
    "stabilize",
    "total_monodromy",
    "FreeWord",
    "LefschetzWord",
    "cyclic_reduce",
    "free_reduce",
    "load_word",
    "save_word",
]
