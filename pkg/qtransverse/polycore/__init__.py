"""Holomorphic polynomials, exponential sums, Taylor truncation and
quadratic normal forms.
"""

from .calculus import (
    SupBound,
    evaluate,
    gradient_majorant,
    measure_sup,
    taylor_tail_bound,
    truncate_with_tail_bound,
    wirtinger_derivative,
)
from .expaffine import ExpAffinePoly, ExpTerm, as_function
from .holopoly import HoloPoly
from .multiindex import MultiIndex, graded_exponents, iter_graded
from .quadratic import PluriharmonicSplit, RealQuadratic, pluriharmonic_split
from .sampling import random_polynomial

__all__ = [
    "SupBound",
    "evaluate",
    "gradient_majorant",
    "measure_sup",
    "taylor_tail_bound",
    "truncate_with_tail_bound",
    "wirtinger_derivative",
    "ExpAffinePoly",
    "ExpTerm",
    "as_function",
    "HoloPoly",
    "MultiIndex",
    "graded_exponents",
    "iter_graded",
    "PluriharmonicSplit",
    "RealQuadratic",
    "pluriharmonic_split",
    "random_polynomial",
]
