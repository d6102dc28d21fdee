"""Numerical constants shared across qtransverse.

Keep raw numerical constants here (no I/O, no numpy state), so they can be
reused consistently across library code, tests and reports. Tunable
engineering defaults (A, p, B, grid steps, budgets) live in the bundled
``defaults.yaml`` instead.
"""

from __future__ import annotations

import math

#: Starting value of the transversality schedule.
ETA_0: float = 0.25

#: Below this value the schedule is treated as underflowed.
ETA_UNDERFLOW: float = 1e-300

#: Absolute tolerance for "point lies on the hypersurface".
ON_SURFACE_TOL: float = 1e-9

#: Relative singular-value tolerance for numerical null spaces.
NULL_SPACE_RTOL: float = 1e-10

#: Largest separation constant tried by the constant selection scan.
MAX_SEPARATION: int = 10_000

#: Exponent of the generic amplitude bound ``exp(-d_k^2 / 9)``.
AMPLITUDE_DECAY: float = 1.0 / 9.0

#: Exponent of the exact flat peak-section decay ``exp(-d_k^2 / 4)``.
PEAK_DECAY: float = 0.25

#: Bracket of admissible peak-section decay exponents ``[1/8, 3/8]``.
PEAK_BRACKET: tuple = (0.125, 0.375)

#: Two-sided normal quantile used for 99% binomial intervals.
Z_99: float = 2.5758293035489004

#: Number of significant digits used for floats in emitted reports.
REPORT_FLOAT_DIGITS: int = 17


def amplitude_constant() -> float:
    """Return ``C = sup_d (1 + d) exp(-5 d^2 / 36)``.

    This is the factor converting the flat-model bound
    ``|w| (1 + d) exp(-d^2/4)`` for a base-plus-linear peak combination into
    the ``exp(-d^2/9)`` form. The maximiser solves ``1 = (5/18) d (1 + d)``.
    """
    d = (-1.0 + math.sqrt(1.0 + 4.0 * 18.0 / 5.0)) / 2.0
    return (1.0 + d) * math.exp(-5.0 * d * d / 36.0)
