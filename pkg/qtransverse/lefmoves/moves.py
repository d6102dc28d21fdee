"""Moves on Lefschetz words and the total monodromy invariant.

A Dehn twist is modelled by conjugation, ``tau_b(a) = b^-1 a b``, which is
the convention under which the left Hurwitz move keeps the ordered product
``c_1 c_2 ... c_m`` literally unchanged.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Callable, Dict, Iterable, List, Mapping, Sequence, Tuple

from .words import FreeWord, LefschetzWord

logger = logging.getLogger(__name__)


def _check_pair(word: LefschetzWord, i: int) -> None:
    if not 1 <= i < len(word):
        raise ValueError(f"Hurwitz index must lie in [1, {len(word) - 1}], got {i}")


def hurwitz_left(word: LefschetzWord, i: int) -> LefschetzWord:
    """``(..., a, b, ...) -> (..., b, b^-1 a b, ...)`` at positions ``i, i + 1``."""
    _check_pair(word, i)
    cycles = list(word.cycles)
    a, b = cycles[i - 1], cycles[i]
    cycles[i - 1 : i + 1] = [b, a.conjugate(b)]
    return LefschetzWord(word.rank, tuple(cycles))


def hurwitz_right(word: LefschetzWord, i: int) -> LefschetzWord:
    """``(..., a, b, ...) -> (..., a b a^-1, a, ...)``; inverse of :func:`hurwitz_left`."""
    _check_pair(word, i)
    cycles = list(word.cycles)
    a, b = cycles[i - 1], cycles[i]
    cycles[i - 1 : i + 1] = [b.conjugate(~a), a]
    return LefschetzWord(word.rank, tuple(cycles))


def cyclic_permute(word: LefschetzWord) -> LefschetzWord:
    """``(c_1, ..., c_m) -> (c_2, ..., c_m, c_1)``."""
    return LefschetzWord(word.rank, word.cycles[1:] + word.cycles[:1])


def cyclic_permute_inverse(word: LefschetzWord) -> LefschetzWord:
    return LefschetzWord(word.rank, word.cycles[-1:] + word.cycles[:-1])


def stabilize(word: LefschetzWord, cycle: Sequence[int]) -> LefschetzWord:
    """Add generator ``rank + 1`` and prepend a cycle through it.

    Raises:
        ValueError: If ``cycle`` does not use the new generator.
    """
    rank = word.rank + 1
    fresh = FreeWord(rank, tuple(cycle))
    if not fresh.uses(rank):
        raise ValueError(f"A stabilizing cycle must use the new generator {rank}")
    return LefschetzWord(rank, (fresh,) + tuple(c.with_rank(rank) for c in word.cycles))


def destabilize(word: LefschetzWord) -> LefschetzWord:
    """Inverse of :func:`stabilize`.

    Raises:
        ValueError: If the first cycle misses the top generator or another
            cycle uses it.
    """
    top = word.rank
    if not word.cycles or not word.cycles[0].uses(top):
        raise ValueError(f"The first cycle must use the top generator {top}")
    rest = word.cycles[1:]
    if any(c.uses(top) for c in rest):
        raise ValueError(f"Generator {top} appears outside the first cycle")
    return LefschetzWord(top - 1, tuple(c.with_rank(top - 1) for c in rest))


@dataclass(frozen=True)
class Monodromy:
    """Ordered product of the cycles and its conjugacy-class representative."""

    product: FreeWord
    representative: Tuple[int, ...]

    def as_dict(self) -> Dict[str, Any]:
        return {"product": list(self.product.letters), "class_representative": list(self.representative)}


def total_monodromy(word: LefschetzWord) -> Monodromy:
    product = FreeWord.identity(word.rank)
    for cycle in word.cycles:
        product = product * cycle
    return Monodromy(product, product.class_representative())


def _index(step: Mapping[str, Any]) -> int:
    i = step.get("index")
    if isinstance(i, bool) or not isinstance(i, int):
        raise ValueError(f"Move {step.get('move')!r} needs an integer 'index', got {i!r}")
    return i


MOVES: Dict[str, Callable[[LefschetzWord, Mapping[str, Any]], LefschetzWord]] = {
    "hurwitz_left": lambda w, step: hurwitz_left(w, _index(step)),
    "hurwitz_right": lambda w, step: hurwitz_right(w, _index(step)),
    "cyclic": lambda w, step: cyclic_permute(w),
    "cyclic_inverse": lambda w, step: cyclic_permute_inverse(w),
    "stabilize": lambda w, step: stabilize(w, step.get("cycle") or ()),
    "destabilize": lambda w, step: destabilize(w),
}


def apply_moves(word: LefschetzWord, script: Iterable[Mapping[str, Any]]) -> List[LefschetzWord]:
    """Run a move script; returns the word after every step (input first).

    Raises:
        ValueError: On an unknown move name or invalid move arguments.
    """
    trace = [word]
    for n, step in enumerate(script, start=1):
        name = step.get("move") if isinstance(step, Mapping) else None
        if name not in MOVES:
            raise ValueError(f"Unknown move {name!r} at step {n}. Available: {', '.join(sorted(MOVES))}")
        trace.append(MOVES[name](trace[-1], step))
        logger.debug("step %d %s -> %s", n, name, trace[-1].as_lists())
    return trace
