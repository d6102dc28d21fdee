"""Seeded random polynomials with a certified sup bound."""

from __future__ import annotations

import logging

import numpy as np

from qtransverse.polycore.calculus import measure_sup
from qtransverse.polycore.holopoly import HoloPoly
from qtransverse.polycore.multiindex import graded_exponents

logger = logging.getLogger(__name__)


def random_polynomial(
    n: int,
    degree: int,
    sup_target: float = 1.0,
    seed: int = 0,
    *,
    margin: float = 0.25,
    resolution: int = 64,
) -> HoloPoly:
    """Random polynomial rescaled so that ``|p| <= sup_target`` on ``B(1 + margin)``.

    Coefficients are standard complex Gaussians over all monomials of degree
    ``<= degree``; the rescaling uses the certified bound of
    :func:`~qtransverse.polycore.calculus.measure_sup`, so any grid sup is
    below the target as well.

    Raises:
        ValueError: If ``degree < 0`` or ``sup_target <= 0``.
    """
    if degree < 0:
        raise ValueError(f"degree must be >= 0, got {degree}")
    if sup_target <= 0:
        raise ValueError(f"sup_target must be > 0, got {sup_target}")
    rng = np.random.default_rng(seed)
    exps = graded_exponents(n, degree)
    coeffs = rng.standard_normal(len(exps)) + 1j * rng.standard_normal(len(exps))
    poly = HoloPoly(n, {tuple(e): c for e, c in zip(exps.tolist(), coeffs)})
    sup = measure_sup(poly, 1.0 + margin, resolution)
    scale = sup_target / sup.bound
    logger.debug("random_polynomial seed=%d degree=%d scale=%g", seed, degree, scale)
    return poly * scale
