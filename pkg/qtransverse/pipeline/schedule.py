"""The transversality schedule and the selection of the separation ``D``.

``eta_0 = 1/4`` and ``eta_j = eta_{j-1} |ln eta_{j-1}|^{-p}``. The
separation ``D`` is the smallest integer with
``exp(-D^2/9) <= (1/B) (M ln M)^{-p}``, ``M = M(D)`` the number of colors
of a ``D``-separated coloring.
"""

from __future__ import annotations

import functools
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Mapping, Optional, Tuple, Union

from qtransverse.core.constants import ETA_0, ETA_UNDERFLOW, MAX_SEPARATION, amplitude_constant
from qtransverse.core.errors import ConstantSelectionError, ScheduleUnderflow

logger = logging.getLogger(__name__)

Calibration = Union[Callable[[int], int], Mapping[int, int]]

#: Number of scanned ``D`` values kept in a selection failure.
_CURVE_SAMPLES = 50


def eta_schedule(p_exponent: float, M: int) -> Tuple[float, ...]:
    """``(eta_0, ..., eta_M)``.

    Raises:
        ValueError: If ``p_exponent < 1`` or ``M < 1``.
        ScheduleUnderflow: If some ``eta_j`` drops below 1e-300.
    """
    if p_exponent < 1:
        raise ValueError(f"p_exponent must be >= 1, got {p_exponent}")
    if M < 1:
        raise ValueError(f"M must be >= 1, got {M}")
    etas = [ETA_0]
    for j in range(1, M + 1):
        prev = etas[-1]
        eta = prev * abs(math.log(prev)) ** (-p_exponent)
        if not eta >= ETA_UNDERFLOW:
            raise ScheduleUnderflow(
                f"eta_{j} underflows ({eta:.3g} < {ETA_UNDERFLOW:g})",
                {"j": j, "eta_prev": prev, "p_exponent": p_exponent, "M": M},
            )
        etas.append(eta)
    return tuple(etas)


def key_inequality(D: float, M: int, p_exponent: float, B: float) -> Tuple[float, float]:
    """Both sides ``(exp(-D^2/9), (1/B) (M ln M)^{-p})``; ``M`` is floored at 2."""
    m = max(M, 2)
    lhs = math.exp(-D * D / 9.0)
    rhs = 0.0 if math.isinf(B) else (1.0 / B) * (m * math.log(m)) ** (-p_exponent)
    return lhs, rhs


@dataclass(frozen=True)
class Schedule:
    """Constants of the construction and the decreasing levels ``eta_j``."""

    p_exponent: float
    A: float
    B: float
    D: float
    M: int
    etas: Tuple[float, ...]
    D_override: bool = False
    calibration: Dict[int, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if len(self.etas) != self.M + 1:
            raise ValueError(f"Expected {self.M + 1} levels, got {len(self.etas)}")
        if any(b >= a for a, b in zip(self.etas, self.etas[1:])) or self.etas[-1] <= 0:
            raise ValueError("eta levels must be positive and strictly decreasing")

    @classmethod
    def build(
        cls, p_exponent: float, A: float, B: float, D: float, M: int, **extra: Any
    ) -> "Schedule":
        return cls(p_exponent, A, B, D, M, eta_schedule(p_exponent, M), **extra)

    @property
    def kappa(self) -> float:
        """Transversality units per amplitude unit, ``1 / (A C)``."""
        return 1.0 / (self.A * amplitude_constant())

    def eta(self, j: int) -> float:
        return self.etas[j]

    def floor(self, j: int) -> float:
        """Level certified on ``X_j``: ``kappa eta_j``."""
        return self.kappa * self.etas[j]

    def cap(self, j: int) -> float:
        """Coefficient cap of color ``j``: ``kappa eta_{j-1}``."""
        return self.kappa * self.etas[j - 1]

    def key_inequality_margins(self) -> List[Dict[str, Any]]:
        """The selection inequality with the actual ``|ln eta_{j-1}|`` per color."""
        lhs = math.exp(-self.D * self.D / 9.0)
        rows = []
        for j in range(1, self.M + 1):
            rhs = (1.0 / self.B) * abs(math.log(self.etas[j - 1])) ** (-self.p_exponent)
            rows.append({"j": j, "lhs": lhs, "rhs": rhs, "holds": lhs <= rhs})
        return rows

    def as_dict(self) -> Dict[str, Any]:
        return {
            "p_exponent": self.p_exponent,
            "A": self.A,
            "B": self.B,
            "D": self.D,
            "M": self.M,
            "kappa": self.kappa,
            "etas": list(self.etas),
            "D_override": self.D_override,
            "calibration": {str(d): m for d, m in sorted(self.calibration.items())},
            "key_inequality": self.key_inequality_margins(),
        }


def _as_callable(calibration: Calibration) -> Tuple[Callable[[int], Optional[int]], Optional[int]]:
    if callable(calibration):
        return functools.lru_cache(maxsize=None)(calibration), None
    table = {int(d): int(m) for d, m in calibration.items()}
    if not table:
        raise ValueError("Empty calibration table")
    keys = sorted(table)

    def lookup(D: int) -> Optional[int]:
        # M(D) is nondecreasing: the next calibrated D bounds it from above
        for key in keys:
            if key >= D:
                return table[key]
        return None

    return lookup, keys[-1]


def select_constants(
    n: int,
    p_exponent: float,
    B: float,
    calibration: Calibration,
    *,
    A: float = 8.0,
    max_D: int = MAX_SEPARATION,
) -> Schedule:
    """Smallest integer ``D >= 2`` satisfying the selection inequality.

    Args:
        n: Complex dimension (recorded only).
        p_exponent: Schedule exponent ``p``.
        B: Constant of the inequality.
        calibration: ``D -> M(D)``; a mapping is read as a step function
            through its next calibrated separation.
        A: Amplitude constant recorded in the schedule.
        max_D: Last separation tried.

    Raises:
        ConstantSelectionError: If no ``D <= max_D`` qualifies; the
            diagnostics hold a sample of the scanned curve.
        ScheduleUnderflow: If the schedule for the selected ``M`` underflows.
    """
    lookup, last = _as_callable(calibration)
    top = max_D if last is None else min(max_D, last)
    curve: List[Dict[str, Any]] = []
    for D in range(2, top + 1):
        M = lookup(D)
        if M is None:
            break
        lhs, rhs = key_inequality(D, M, p_exponent, B)
        if len(curve) < _CURVE_SAMPLES:
            curve.append({"D": D, "M": M, "lhs": lhs, "rhs": rhs})
        if lhs <= rhs:
            known = {d: lookup(d) for d in range(2, D + 1)}
            logger.info("Selected D=%d with M=%d (n=%d, p=%g, B=%g)", D, M, n, p_exponent, B)
            return Schedule.build(
                p_exponent, A, B, float(D), int(M),
                calibration={d: int(m) for d, m in known.items() if m is not None},
            )
        if lhs == 0.0 and rhs == 0.0:
            break
    raise ConstantSelectionError(
        f"No separation D <= {top} satisfies the selection inequality",
        {"n": n, "p_exponent": p_exponent, "B": B, "curve": curve},
    )
