"""Real algebraic sets given by polynomial equations.

Real polynomials reuse :class:`~qtransverse.polycore.HoloPoly` with real
coefficients; evaluation at real points keeps the real part.
"""

from __future__ import annotations

import functools
import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Mapping, Sequence, Tuple

import numpy as np

from qtransverse.polycore import HoloPoly, graded_exponents

logger = logging.getLogger(__name__)

#: Imaginary parts above this are rejected by :class:`VarietySpec`.
_REAL_TOL = 1e-12


def _real_points(x: Any, n: int) -> Tuple[np.ndarray, Tuple[int, ...]]:
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 0 or arr.shape[-1] != n:
        got = arr.shape[-1] if arr.ndim else "scalar"
        raise ValueError(f"Point dimension mismatch: expected n={n}, got {got}")
    return arr.reshape(-1, n), arr.shape[:-1]


@dataclass(frozen=True)
class VarietySpec:
    """``X = {x in R^n : P_1(x) = ... = P_s(x) = 0}`` of nominal codimension ``m``.

    A constant nonzero polynomial is accepted and describes the empty set.

    Raises:
        ValueError: On mismatched ambient dimensions, complex coefficients,
            an empty polynomial list or ``m`` outside ``[1, n]``.
    """

    n: int
    polys: Tuple[HoloPoly, ...]
    m: int = 1

    def __post_init__(self) -> None:
        polys = tuple(self.polys)
        object.__setattr__(self, "polys", polys)
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if not polys:
            raise ValueError("VarietySpec needs at least one defining polynomial")
        if not 1 <= self.m <= self.n:
            raise ValueError(f"Codimension m must lie in [1, {self.n}], got {self.m}")
        for i, p in enumerate(polys):
            if p.n != self.n:
                raise ValueError(f"Polynomial {i} lives in n={p.n}, expected n={self.n}")
            if any(abs(c.imag) > _REAL_TOL for _, c in p.terms()):
                raise ValueError(f"Polynomial {i} has non-real coefficients")

    @property
    def degree(self) -> int:
        """Maximum total degree (0 for constants)."""
        return int(max(max(p.degree, 0) for p in self.polys))

    @property
    def is_empty(self) -> bool:
        """True when some defining polynomial is a nonzero constant."""
        return any(p.degree == 0 for p in self.polys)

    @functools.cached_property
    def _gradients(self) -> List[List[HoloPoly]]:
        return [[p.derivative(j) for j in range(1, self.n + 1)] for p in self.polys]

    def evaluate(self, x: Any) -> np.ndarray:
        """Values ``(..., s)`` of the defining polynomials at real points."""
        pts, lead = _real_points(x, self.n)
        values = np.stack([p.evaluate(pts.astype(complex)).real for p in self.polys], axis=-1)
        return values.reshape(lead + (len(self.polys),))

    def jacobian(self, x: Any) -> np.ndarray:
        """Jacobian ``(..., s, n)`` at real points."""
        pts, lead = _real_points(x, self.n)
        z = pts.astype(complex)
        rows = [np.stack([g.evaluate(z).real for g in grads], axis=-1) for grads in self._gradients]
        return np.stack(rows, axis=-2).reshape(lead + (len(self.polys), self.n))

    def as_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "m": self.m,
            "degree": self.degree,
            "polys": [p.to_dict() for p in self.polys],
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "VarietySpec":
        polys = tuple(HoloPoly.from_dict(p) for p in data["polys"])
        return cls(n=int(data["n"]), polys=polys, m=int(data.get("m", 1)))


def random_hypersurface(d: int, seed: int = 0, n: int = 2) -> VarietySpec:
    """Random degree ``d`` hypersurface through a random point of ``[0, 1]^n``.

    Coefficients are standard Gaussian, normalised to unit Euclidean norm;
    the constant term is then shifted so the polynomial vanishes at a
    uniform point of the cube.

    Raises:
        ValueError: If ``d < 1``.
    """
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    rng = np.random.default_rng([seed, d])
    exps = graded_exponents(n, d)
    coeffs = rng.standard_normal(len(exps))
    # keep the top degree present
    top = np.flatnonzero(exps.sum(axis=1) == d)
    coeffs[top[0]] += 1.0 if coeffs[top[0]] >= 0 else -1.0
    coeffs /= np.linalg.norm(coeffs)
    poly = HoloPoly(n, {tuple(int(e) for e in a): float(c) for a, c in zip(exps, coeffs)})
    anchor = rng.uniform(0.0, 1.0, size=n)
    shift = poly.evaluate(anchor.astype(complex)).real
    poly = poly - float(shift)
    logger.debug("Random degree-%d hypersurface through %s", d, anchor.tolist())
    return VarietySpec(n=n, polys=(poly,), m=1)


def hypersurface(poly: HoloPoly) -> VarietySpec:
    """Codimension one variety ``{poly = 0}``."""
    return VarietySpec(n=poly.n, polys=(poly,), m=1)


def polys_from_dicts(items: Sequence[Mapping[str, Any]]) -> List[HoloPoly]:
    """Parse a JSON list of polynomial tables."""
    if isinstance(items, Mapping) or not isinstance(items, Sequence):
        raise TypeError("Expected a list of polynomial tables")
    return [HoloPoly.from_dict(item) for item in items]
