"""Hypersurfaces containing the image of a polynomial map.

For ``F: R^n -> R^m`` of degree ``d`` and ``n < m``, the pullback
``G -> G o F`` maps polynomials of degree ``<= D`` on ``R^m`` linearly into
polynomials of degree ``<= dD`` on ``R^n``. Once the domain is larger than
the target, the kernel is nonzero and any kernel element ``G`` vanishes on
the image of ``F``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from qtransverse.core.constants import NULL_SPACE_RTOL
from qtransverse.core.errors import NullSpaceEmpty
from qtransverse.polycore import HoloPoly, graded_exponents

from .bounds import auroux_degree_bound, dimension_count_holds

logger = logging.getLogger(__name__)

#: Residual ceiling for an accepted witness.
RESIDUAL_TOL = 1e-8


@dataclass(frozen=True)
class ContainmentWitness:
    """Nonzero ``G`` on ``R^m`` with ``G o F = 0``.

    Attributes:
        G: Unit coefficient-norm polynomial in ``m`` variables.
        degree_bound: The degree bound ``D`` the search ran under.
        residual: ``max |G o F|`` over the validation sample.
        composition_residual: Largest coefficient of ``G o F``.
        singular_value: The singular value of the selected null vector,
            relative to the largest one.
        nullity: Numerical null-space dimension at ``deg G``.
    """

    G: HoloPoly
    degree_bound: int
    residual: float
    composition_residual: float
    singular_value: float
    nullity: int

    @property
    def degree(self) -> int:
        return int(self.G.degree)

    def as_dict(self) -> Dict[str, Any]:
        return {
            "G": self.G.to_dict(),
            "degree": self.degree,
            "degree_bound": self.degree_bound,
            "residual": self.residual,
            "composition_residual": self.composition_residual,
            "singular_value": self.singular_value,
            "nullity": self.nullity,
        }


def _map_degree(F: Sequence[HoloPoly]) -> int:
    return max(1, int(max(max(f.degree, 0) for f in F)))


def _power_table(F: Sequence[HoloPoly], D: int) -> List[List[HoloPoly]]:
    n = F[0].n
    table = []
    for f in F:
        powers = [HoloPoly.constant(n, 1.0)]
        for _ in range(D):
            powers.append(powers[-1] * f)
        table.append(powers)
    return table


def pullback_matrix(F: Sequence[HoloPoly], D: int) -> Tuple[np.ndarray, np.ndarray]:
    """Matrix of ``G -> G o F`` in monomial bases.

    Returns:
        ``(A, betas)`` with one column per exponent ``beta`` of ``G``
        (graded order) and one row per monomial of ``G o F``.
    """
    n = F[0].n
    m = len(F)
    betas = graded_exponents(m, D)
    powers = _power_table(F, D)
    rows: Dict[tuple, int] = {}
    columns = []
    for beta in betas:
        image = HoloPoly.constant(n, 1.0)
        for i, e in enumerate(beta):
            if e:
                image = image * powers[i][int(e)]
        column = {}
        for alpha, c in image.terms():
            column[rows.setdefault(tuple(alpha), len(rows))] = c.real
        columns.append(column)
    A = np.zeros((max(1, len(rows)), len(betas)))
    for j, column in enumerate(columns):
        for i, value in column.items():
            A[i, j] = value
    return A, betas


def _validation_residual(G: HoloPoly, F: Sequence[HoloPoly], samples: int, seed: int) -> float:
    rng = np.random.default_rng(seed)
    x = rng.uniform(-1.0, 1.0, size=(samples, F[0].n)).astype(complex)
    image = np.stack([f.evaluate(x) for f in F], axis=-1)
    return float(np.max(np.abs(G.evaluate(image))))


def containment_hypersurface(
    F: Sequence[HoloPoly],
    D: Optional[int] = None,
    *,
    samples: int = 100,
    seed: int = 0,
) -> ContainmentWitness:
    """Find a lowest-degree ``G`` (``deg G <= D``) vanishing on the image of ``F``.

    Degrees ``1..D`` are tried in turn; at the first degree with a numerical
    null space (singular values ``<= 1e-10`` times the largest) the null
    vector of smallest singular value is returned, sign-normalised so that
    its largest coefficient is positive.

    Args:
        F: The ``m`` component polynomials, all in ``n`` real variables with
            real coefficients.
        D: Degree bound; ``None`` uses :func:`auroux_degree_bound`.
        samples: Size of the validation sample in ``[-1, 1]^n``.
        seed: Seed of the validation sample.

    Raises:
        ValueError: On an empty or inconsistent map, ``n >= m``, or a ``D``
            for which the dimension count fails.
        NullSpaceEmpty: If no degree up to ``D`` has a numerical null vector.
    """
    F = list(F)
    if not F:
        raise ValueError("F needs at least one component")
    n = F[0].n
    if any(f.n != n for f in F):
        raise ValueError("All components of F must live in the same number of variables")
    m = len(F)
    d = _map_degree(F)
    if D is None:
        D = auroux_degree_bound(n, m, d)
    elif n >= m:
        raise ValueError(f"Need n < m for a containing hypersurface, got n={n}, m={m}")
    elif D < 1 or not dimension_count_holds(n, m, d, D):
        raise ValueError(f"Dimension count fails for D={D} (n={n}, m={m}, d={d})")

    smallest = np.inf
    for degree in range(1, D + 1):
        A, betas = pullback_matrix(F, degree)
        _, s, vh = scipy.linalg.svd(A, full_matrices=True)
        top = float(s[0]) if s.size and s[0] > 0 else 1.0
        spectrum = np.zeros(vh.shape[0])
        spectrum[: s.size] = s / top
        null = np.flatnonzero(spectrum <= NULL_SPACE_RTOL)
        smallest = min(smallest, float(spectrum.min()))
        if null.size == 0:
            logger.debug("No null vector at degree %d (smallest sv %.3e)", degree, spectrum.min())
            continue
        pick = null[np.argmin(spectrum[null])]
        g = vh[pick].copy()
        g /= np.linalg.norm(g)
        if g[np.argmax(np.abs(g))] < 0:
            g = -g
        G = HoloPoly(m, {tuple(int(e) for e in b): float(c) for b, c in zip(betas, g)})
        composition = float(np.max(np.abs(A @ g)))
        residual = _validation_residual(G, F, samples, seed)
        logger.info(
            "Containment at degree %d (bound %d): nullity %d, residual %.3e",
            degree, D, null.size, residual,
        )
        if residual > RESIDUAL_TOL:
            logger.warning("Containment residual %.3e exceeds %.0e", residual, RESIDUAL_TOL)
        return ContainmentWitness(
            G=G,
            degree_bound=int(D),
            residual=residual,
            composition_residual=composition,
            singular_value=float(spectrum[pick]),
            nullity=int(null.size),
        )
    raise NullSpaceEmpty(
        f"No null vector up to degree {D}",
        {"degree_bound": int(D), "smallest_singular_value": smallest},
    )
