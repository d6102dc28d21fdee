"""Monomial exponents and graded enumeration."""

from __future__ import annotations

import functools
from typing import Iterable, Iterator, Tuple

import numpy as np


class MultiIndex(tuple):
    """Exponent vector of a monomial ``z^alpha``.

    A ``tuple`` of nonnegative ints, so it hashes and compares like one and
    can key coefficient tables directly.
    """

    __slots__ = ()

    def __new__(cls, exponents: Iterable[int]) -> "MultiIndex":
        values = tuple(int(e) for e in exponents)
        if not values:
            raise ValueError("MultiIndex needs at least one exponent (n >= 1)")
        if any(e < 0 for e in values):
            raise ValueError(f"MultiIndex exponents must be nonnegative, got {values}")
        return super().__new__(cls, values)

    @property
    def n(self) -> int:
        return len(self)

    @property
    def degree(self) -> int:
        """Total degree ``|alpha|``."""
        return sum(self)

    def shifted(self, axis: int, delta: int) -> "MultiIndex":
        """Return the index with ``delta`` added to 0-based ``axis``."""
        values = list(self)
        values[axis] += delta
        return MultiIndex(values)

    @classmethod
    def zero(cls, n: int) -> "MultiIndex":
        return cls((0,) * n)

    @classmethod
    def unit(cls, n: int, axis: int) -> "MultiIndex":
        """Exponent of the coordinate ``z_axis`` (0-based ``axis``)."""
        values = [0] * n
        values[axis] = 1
        return cls(values)


def iter_graded(n: int, max_degree: int) -> Iterator[MultiIndex]:
    """Yield all exponents of total degree ``<= max_degree``.

    Order: by total degree, then reverse-lexicographic within a degree
    (``z1^2, z1 z2, z2^2`` for ``n = 2``).
    """
    for degree in range(max_degree + 1):
        for alpha in _compositions(n, degree):
            yield MultiIndex(alpha)


def _compositions(n: int, total: int) -> Iterator[Tuple[int, ...]]:
    if n == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(n - 1, total - first):
            yield (first,) + rest


@functools.lru_cache(maxsize=64)
def graded_exponents(n: int, max_degree: int) -> np.ndarray:
    """Array ``(K, n)`` of all exponents of degree ``<= max_degree``.

    Cached; callers must not modify the returned array.
    """
    rows = list(iter_graded(n, max_degree))
    out = np.array(rows, dtype=np.int64).reshape(len(rows), n)
    out.setflags(write=False)
    return out
