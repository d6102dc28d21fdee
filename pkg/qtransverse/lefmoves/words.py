"""Reduced words in a free group and Lefschetz words of vanishing cycles.

Letters are nonzero integers: ``g`` is generator ``g`` and ``-g`` its
inverse. Words are stored freely reduced.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Sequence, Tuple, Union


def free_reduce(letters: Iterable[int]) -> Tuple[int, ...]:
    """Cancel adjacent ``x x^-1`` pairs with a stack (one left-to-right pass)."""
    stack: List[int] = []
    for letter in letters:
        if stack and stack[-1] == -letter:
            stack.pop()
        else:
            stack.append(letter)
    return tuple(stack)


def _letter_key(letter: int) -> Tuple[int, int]:
    # generators ordered 1, -1, 2, -2, ...
    return abs(letter), int(letter < 0)


def cyclic_reduce(letters: Sequence[int]) -> Tuple[int, ...]:
    """Strip matching ``x ... x^-1`` pairs at the two ends of a reduced word."""
    word = tuple(letters)
    lo, hi = 0, len(word) - 1
    while lo < hi and word[lo] == -word[hi]:
        lo += 1
        hi -= 1
    return word[lo : hi + 1]


@dataclass(frozen=True)
class FreeWord:
    """Reduced word over generators ``1..rank``.

    Raises:
        ValueError: On a zero letter or a generator outside ``[1, rank]``.
    """

    rank: int
    letters: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.rank < 0:
            raise ValueError(f"rank must be >= 0, got {self.rank}")
        letters = tuple(int(x) for x in self.letters)
        for letter in letters:
            if letter == 0 or abs(letter) > self.rank:
                raise ValueError(f"Letter {letter} is not a generator of rank {self.rank}")
        object.__setattr__(self, "letters", free_reduce(letters))

    @classmethod
    def identity(cls, rank: int) -> "FreeWord":
        return cls(rank)

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "FreeWord") -> "FreeWord":
        if not isinstance(other, FreeWord):
            return NotImplemented
        if other.rank != self.rank:
            raise ValueError(f"Rank mismatch: {self.rank} vs {other.rank}")
        return FreeWord(self.rank, self.letters + other.letters)

    def __invert__(self) -> "FreeWord":
        return FreeWord(self.rank, tuple(-x for x in reversed(self.letters)))

    def conjugate(self, by: "FreeWord") -> "FreeWord":
        """``by^-1 self by``."""
        return ~by * self * by

    def is_identity(self) -> bool:
        return not self.letters

    def uses(self, generator: int) -> bool:
        return any(abs(x) == generator for x in self.letters)

    def with_rank(self, rank: int) -> "FreeWord":
        return FreeWord(rank, self.letters)

    def class_representative(self) -> Tuple[int, ...]:
        """Lexicographically least rotation of the cyclic reduction."""
        core = cyclic_reduce(self.letters)
        if not core:
            return ()
        rotations = [core[i:] + core[:i] for i in range(len(core))]
        return min(rotations, key=lambda w: [_letter_key(x) for x in w])

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return " ".join(f"x{x}" if x > 0 else f"x{-x}^-1" for x in self.letters)


@dataclass(frozen=True)
class LefschetzWord:
    """Ordered vanishing cycles ``(c_1, ..., c_m)`` over one free group."""

    rank: int
    cycles: Tuple[FreeWord, ...] = ()

    def __post_init__(self) -> None:
        cycles = tuple(self.cycles)
        for i, cycle in enumerate(cycles, start=1):
            if cycle.rank != self.rank:
                raise ValueError(f"Cycle {i} has rank {cycle.rank}, expected {self.rank}")
        object.__setattr__(self, "cycles", cycles)

    @classmethod
    def from_lists(cls, rank: int, cycles: Iterable[Sequence[int]]) -> "LefschetzWord":
        return cls(rank, tuple(FreeWord(rank, tuple(c)) for c in cycles))

    def __len__(self) -> int:
        return len(self.cycles)

    def as_lists(self) -> List[List[int]]:
        return [list(c.letters) for c in self.cycles]

    def to_dict(self) -> Dict[str, Any]:
        return {"rank": self.rank, "cycles": self.as_lists()}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "LefschetzWord":
        """Parse ``{"rank": r, "cycles": [[+-ints]]}``.

        Raises:
            ValueError: On missing keys or malformed cycles.
        """
        if "rank" not in data or "cycles" not in data:
            raise ValueError("A word needs 'rank' and 'cycles' keys")
        rank = data["rank"]
        if isinstance(rank, bool) or not isinstance(rank, int):
            raise ValueError(f"rank must be an integer, got {rank!r}")
        cycles = data["cycles"]
        if not isinstance(cycles, list) or not all(isinstance(c, list) for c in cycles):
            raise ValueError("cycles must be a list of integer lists")
        return cls.from_lists(rank, cycles)


def load_word(path: Union[str, Path]) -> LefschetzWord:
    """Read a word JSON file.

    Raises:
        FileNotFoundError: If the file does not exist.
        ValueError: On malformed content.
    """
    p = Path(path)
    if not p.exists():
        raise FileNotFoundError(f"Word file not found: {p}")
    return LefschetzWord.from_dict(json.loads(p.read_text(encoding="utf-8")))


def save_word(word: LefschetzWord, path: Union[str, Path]) -> Path:
    p = Path(path)
    p.write_text(json.dumps(word.to_dict(), sort_keys=True) + "\n", encoding="utf-8")
    return p
