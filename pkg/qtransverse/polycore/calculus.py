"""Representation-independent calculus: evaluation, derivatives, certified
Taylor truncation and certified sup bounds on balls.
"""

from __future__ import annotations

import logging
import math
from typing import Any, Dict, NamedTuple, Tuple, Union

import numpy as np

from qtransverse.core import grids
from qtransverse.polycore.expaffine import ExpAffinePoly, as_function
from qtransverse.polycore.holopoly import HoloPoly

logger = logging.getLogger(__name__)

Function = Union[HoloPoly, ExpAffinePoly]


def evaluate(p: Function, z: Any) -> Union[complex, np.ndarray]:
    """Evaluate a polynomial or exponential sum at ``z`` (shape ``(..., n)``).

    Raises:
        ValueError: On a dimension mismatch.
    """
    return as_function(p).evaluate(z)


def wirtinger_derivative(p: Function, axis: int) -> Function:
    """``d p / d z_axis`` (1-based), in the same representation as ``p``.

    Raises:
        ValueError: If ``axis`` is outside ``[1, n]``.
    """
    return as_function(p).derivative(axis)


def gradient_majorant(f: Function, centers: Any, radius: Union[float, np.ndarray]) -> np.ndarray:
    """Upper bound of ``|grad f|`` on balls, from per-axis majorants."""
    f = as_function(f)
    parts = [f.derivative(j).ball_majorant(centers, radius) for j in range(1, f.n + 1)]
    return np.sqrt(np.sum(np.square(parts), axis=0))


# ---------------------------------------------------------------------------
# Taylor truncation
# ---------------------------------------------------------------------------


def taylor_tail_bound(sup_bound: float, degree: int, margin: float) -> float:
    """``M R^-(m+1) / (1 - 1/R)`` with ``R = 1 + margin / 2``.

    Restricted to a complex line through the origin, ``f`` is a one-variable
    holomorphic function bounded by ``M`` on the disc of radius ``1 + margin``;
    Cauchy's estimate bounds its degree ``k`` coefficient by ``M R^-k`` and
    the geometric series sums the discarded orders on the unit disc.
    """
    if margin <= 0:
        raise ValueError(f"margin must be > 0, got {margin}")
    if degree < 0:
        raise ValueError(f"degree must be >= 0, got {degree}")
    ratio = 1.0 + 0.5 * margin
    return float(sup_bound) * ratio ** (-(degree + 1)) / (1.0 - 1.0 / ratio)


def truncate_with_tail_bound(
    f: Function, degree: int, sup_bound: float, margin: float
) -> Tuple[HoloPoly, float]:
    """Degree ``<= degree`` Taylor polynomial at 0 and a bound on the remainder.

    Args:
        f: Function holomorphic on ``B(1 + margin)``.
        degree: Truncation degree ``m``.
        sup_bound: Valid bound ``M`` for ``|f|`` on ``B(1 + margin)``.
        margin: Outer margin ``eps > 0``.

    Returns:
        ``(taylor_polynomial, tail)`` with ``tail >= sup_{B(1)} |f - taylor|``.

    Raises:
        ValueError: If ``margin <= 0``, ``degree < 0`` or ``sup_bound < 0``.
    """
    f = as_function(f)
    if sup_bound < 0:
        raise ValueError(f"sup_bound must be >= 0, got {sup_bound}")
    tail = taylor_tail_bound(sup_bound, degree, margin)
    poly = f.truncate(degree) if isinstance(f, HoloPoly) else f.taylor(degree)
    return poly, tail


# ---------------------------------------------------------------------------
# Certified sup on a ball
# ---------------------------------------------------------------------------


class SupBound(NamedTuple):
    """Certified sup: ``bound = measured + slack >= sup |f|``."""

    measured: float
    slack: float
    bound: float

    def as_dict(self) -> Dict[str, float]:
        return self._asdict()


def measure_sup(f: Function, radius: float, resolution: int = 64) -> SupBound:
    """Certified bound for ``sup |f|`` on the closed ball ``B(0, radius)``.

    By the maximum principle the sup is attained on the bounding sphere. For
    ``n <= 2`` the sphere is sampled on a deterministic grid (a circle, or
    Hopf rings) with ``resolution`` points per full angle; the slack is the
    gradient majorant on the ball times the grid covering radius. For
    ``n >= 3`` the coefficient majorant is returned.

    Raises:
        ValueError: If ``radius <= 0`` or ``resolution < 4``.
    """
    f = as_function(f)
    if radius <= 0:
        raise ValueError(f"radius must be > 0, got {radius}")
    if resolution < 4:
        raise ValueError(f"resolution must be >= 4, got {resolution}")
    origin = np.zeros(f.n)
    if f.n > 2:
        bound = float(f.ball_majorant(origin, radius))
        return SupBound(bound, 0.0, bound)
    centers, half = grids.sphere_cells(f.n, 2.0 * math.pi / resolution)
    points = radius * grids.sphere_to_complex(centers)
    measured = float(np.max(np.abs(f.evaluate(points)))) if points.size else 0.0
    cover = radius * float(np.max(grids.sphere_cell_radius(centers, half)))
    slack = float(gradient_majorant(f, origin, radius)) * cover
    logger.debug("measure_sup radius=%g measured=%g slack=%g", radius, measured, slack)
    return SupBound(measured, slack, measured + slack)
