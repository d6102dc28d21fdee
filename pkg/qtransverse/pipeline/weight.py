"""A complete weight for the Weinstein potential ``g(phi)``.

``g(x) = int_{-inf}^x exp(-t^2 - 1/t) dt`` on ``x < 0``. Completeness of
the associated Liouville field needs ``(log g')' |x|`` bounded away from
zero, which here is ``(-2x + x^{-2}) |x|``.

``g'`` leaves the float range as ``x -> 0-`` (its log is ``-x^2 - 1/x``),
so everything is computed in log space. The quadrature runs on the
integrand scaled by ``1/g'(x)``, which is at most 1 on ``(-inf, x]``
because ``-t^2 - 1/t`` increases there. Values that do not fit a float are
reported as ``inf`` next to their finite logs.
"""

from __future__ import annotations

import math
from typing import Any, Dict, NamedTuple

from scipy import integrate

#: Below ``exp(-_QUAD_FLOOR)`` the peak width of the scaled integrand is
#: not resolvable and its integral is replaced by the width itself.
_QUAD_FLOOR = 600.0


class WeightValue(NamedTuple):
    """``g``, its first two derivatives and the completeness margin at ``x``."""

    x: float
    g: float
    g1: float
    g2: float
    margin: float
    log_g: float
    log_g1: float

    def as_dict(self) -> Dict[str, Any]:
        return self._asdict()


def _exp(value: float) -> float:
    try:
        return math.exp(value)
    except OverflowError:
        return math.inf


def _log_slope(ax: float) -> float:
    # log(2|x| + |x|^-2) without forming either power outside the float range
    if ax >= 1.0:
        return math.log(2.0 * ax) + math.log1p(0.5 / (ax * ax * ax))
    return -2.0 * math.log(ax) + math.log1p(2.0 * ax * ax * ax)


def _scaled_integral(x: float, width: float) -> float:
    """``int_0^inf exp(psi(v)) dv`` with ``psi(v) = phi(x - v) - phi(x) <= 0``."""

    def integrand(v: float) -> float:
        return math.exp(v * ((2.0 * x - v) - 1.0 / ((x - v) * x)))

    head, _ = integrate.quad(
        integrand, 0.0, 100.0 * width, points=[width, 10.0 * width], epsabs=0.0, epsrel=1e-10, limit=200
    )
    tail, _ = integrate.quad(integrand, 100.0 * width, math.inf, epsabs=1e-12 * head, epsrel=1e-10)
    return head + tail


def complete_weight_g(x: float) -> WeightValue:
    """Evaluate the weight at ``x < 0``; ``g`` by adaptive quadrature (rel. tol 1e-10).

    Raises:
        ValueError: If ``x >= 0``.
    """
    x = float(x)
    if not x < 0:
        raise ValueError(f"x must be < 0, got {x}")
    ax = -x
    log_slope = _log_slope(ax)
    log_g1 = -ax * ax + 1.0 / ax
    log_width = -log_slope
    if log_width > -_QUAD_FLOOR and math.isfinite(log_g1):
        log_integral = math.log(_scaled_integral(x, math.exp(log_width)))
    else:
        log_integral = log_width
    log_g = log_g1 + log_integral
    return WeightValue(
        x=x,
        g=_exp(log_g),
        g1=_exp(log_g1),
        g2=_exp(log_slope + log_g1),
        margin=_exp(log_slope + math.log(ax)),
        log_g=log_g,
        log_g1=log_g1,
    )
