"""Closed-form degree and component bounds for real algebraic sets."""

from __future__ import annotations

import logging
import math

logger = logging.getLogger(__name__)


def dimension_count_holds(n: int, m: int, d: int, D: int) -> bool:
    """``binom(m + D, m) > binom(n + d D, n)``.

    The left side counts polynomials of degree ``<= D`` on ``R^m``; the
    right side counts the coefficients of their pullbacks by a degree ``d``
    map from ``R^n``. When it holds, the pullback map has a kernel.
    """
    return math.comb(m + D, m) > math.comb(n + d * D, n)


def auroux_degree_bound(n: int, m: int, d: int) -> int:
    """Degree ``D = ceil(((m!/n!) d^n)^(1/(m-n)))`` of a containing hypersurface.

    The value is computed in exact integer arithmetic. If the dimension count
    fails for the formula value (small cases), ``D`` is raised until it holds.

    Raises:
        ValueError: If ``n >= m`` or ``d < 1``.
    """
    if n >= m:
        raise ValueError(f"Need n < m for a containing hypersurface, got n={n}, m={m}")
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    target = (math.factorial(m) // math.factorial(n)) * d**n
    k = m - n
    D = max(1, int(round(target ** (1.0 / k))))
    while D**k < target:
        D += 1
    while D > 1 and (D - 1) ** k >= target:
        D -= 1
    formula = D
    while not dimension_count_holds(n, m, d, D):
        D += 1
    if D != formula:
        logger.warning(
            "Dimension count fails at the formula degree %d for (n=%d, m=%d, d=%d); using %d",
            formula, n, m, d, D,
        )
    return D


def milnor_bound(n: int, d: int) -> int:
    """Bound ``d (2d - 1)^(n - 1)`` on the number of connected components.

    Raises:
        ValueError: If ``n < 1`` or ``d < 1``.
    """
    if n < 1 or d < 1:
        raise ValueError(f"Need n >= 1 and d >= 1, got n={n}, d={d}")
    return d * (2 * d - 1) ** (n - 1)
