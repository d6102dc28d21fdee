"""Sparse holomorphic polynomials in ``n`` complex variables.

Coefficients live in a mapping ``MultiIndex -> complex``; exact zeros are
pruned after every operation. Axes are 1-based in the public API
(``derivative(1)`` is ``d/dz1``).

Evaluation is vectorised over arrays of points of shape ``(..., n)`` using
per-coordinate power tables.
"""

from __future__ import annotations

import functools
import math
from numbers import Number
from typing import Any, Dict, Iterable, List, Mapping, Optional, Tuple, Union

import numpy as np

from qtransverse.polycore.multiindex import MultiIndex

Scalar = Union[int, float, complex, np.number]

#: Upper bound on ``points * terms * n`` evaluated in one numpy pass.
_EVAL_BLOCK = 1 << 22


def as_points(z: Any, n: int) -> Tuple[np.ndarray, Tuple[int, ...]]:
    """Flatten ``z`` to ``(N, n)`` complex points.

    Returns:
        The flattened array and the leading shape to restore (``()`` for a
        single point).

    Raises:
        ValueError: If the trailing dimension is not ``n``.
    """
    arr = np.asarray(z, dtype=complex)
    if arr.ndim == 0 or arr.shape[-1] != n:
        got = arr.shape[-1] if arr.ndim else "scalar"
        raise ValueError(f"Point dimension mismatch: expected n={n}, got {got}")
    lead = arr.shape[:-1]
    return arr.reshape(-1, n), lead


def _check_axis(axis: int, n: int) -> int:
    if isinstance(axis, bool) or not isinstance(axis, (int, np.integer)):
        raise TypeError(f"axis must be an integer, got {type(axis).__name__}")
    if not 1 <= axis <= n:
        raise ValueError(f"axis must lie in [1, {n}], got {axis}")
    return int(axis) - 1


class HoloPoly:
    """Holomorphic polynomial ``sum_alpha c_alpha z^alpha``.

    Instances are treated as immutable; every operation returns a new
    polynomial.

    Args:
        n: Number of complex variables.
        coeffs: Mapping from exponent tuples to coefficients.
    """

    __array_ufunc__ = None

    def __init__(self, n: int, coeffs: Optional[Mapping[Iterable[int], Scalar]] = None) -> None:
        if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
            raise ValueError(f"n must be a positive integer, got {n!r}")
        self._n = int(n)
        table: Dict[MultiIndex, complex] = {}
        for alpha, value in (coeffs or {}).items():
            key = MultiIndex(alpha)
            if key.n != self._n:
                raise ValueError(f"Exponent {tuple(key)} has length {key.n}, expected n={self._n}")
            c = complex(value)
            if c != 0:
                table[key] = table.get(key, 0j) + c
        self._coeffs = {k: v for k, v in table.items() if v != 0}

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, n: int) -> "HoloPoly":
        return cls(n)

    @classmethod
    def constant(cls, n: int, value: Scalar) -> "HoloPoly":
        return cls(n, {MultiIndex.zero(n): value})

    @classmethod
    def monomial(cls, n: int, alpha: Iterable[int], coeff: Scalar = 1.0) -> "HoloPoly":
        return cls(n, {tuple(alpha): coeff})

    @classmethod
    def variable(cls, n: int, axis: int) -> "HoloPoly":
        """The coordinate function ``z_axis`` (1-based)."""
        return cls(n, {MultiIndex.unit(n, _check_axis(axis, n)): 1.0})

    # -- basic properties -------------------------------------------------

    @property
    def n(self) -> int:
        return self._n

    @property
    def coeffs(self) -> Dict[MultiIndex, complex]:
        """Copy of the coefficient table."""
        return dict(self._coeffs)

    def terms(self) -> List[Tuple[MultiIndex, complex]]:
        """Coefficients sorted by (degree, exponent)."""
        return sorted(self._coeffs.items(), key=lambda kv: (kv[0].degree, tuple(kv[0])))

    def coefficient(self, alpha: Iterable[int]) -> complex:
        return self._coeffs.get(MultiIndex(alpha), 0j)

    @property
    def degree(self) -> float:
        """Total degree; ``-inf`` for the zero polynomial."""
        if not self._coeffs:
            return -math.inf
        return max(alpha.degree for alpha in self._coeffs)

    def is_zero(self) -> bool:
        return not self._coeffs

    def __len__(self) -> int:
        return len(self._coeffs)

    def __repr__(self) -> str:
        return f"HoloPoly(n={self._n}, terms={len(self._coeffs)}, degree={self.degree})"

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Number):
            other = HoloPoly.constant(self._n, other)  # type: ignore[arg-type]
        if not isinstance(other, HoloPoly):
            return NotImplemented
        return self._n == other._n and self._coeffs == other._coeffs

    __hash__ = None  # type: ignore[assignment]

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other: Any) -> Optional["HoloPoly"]:
        if isinstance(other, HoloPoly):
            if other._n != self._n:
                raise ValueError(f"Dimension mismatch: n={self._n} vs n={other._n}")
            return other
        if isinstance(other, (Number, np.number)):
            return HoloPoly.constant(self._n, other)  # type: ignore[arg-type]
        return None

    def __add__(self, other: Any) -> "HoloPoly":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        table = dict(self._coeffs)
        for alpha, c in rhs._coeffs.items():
            table[alpha] = table.get(alpha, 0j) + c
        return HoloPoly(self._n, table)

    __radd__ = __add__

    def __neg__(self) -> "HoloPoly":
        return HoloPoly(self._n, {a: -c for a, c in self._coeffs.items()})

    def __sub__(self, other: Any) -> "HoloPoly":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self, other: Any) -> "HoloPoly":
        return (-self) + other

    def __mul__(self, other: Any) -> "HoloPoly":
        if isinstance(other, (Number, np.number)) and not isinstance(other, HoloPoly):
            s = complex(other)  # type: ignore[arg-type]
            return HoloPoly(self._n, {a: s * c for a, c in self._coeffs.items()})
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        table: Dict[Tuple[int, ...], complex] = {}
        for a, ca in self._coeffs.items():
            for b, cb in rhs._coeffs.items():
                key = tuple(x + y for x, y in zip(a, b))
                table[key] = table.get(key, 0j) + ca * cb
        return HoloPoly(self._n, table)

    __rmul__ = __mul__

    # -- calculus ---------------------------------------------------------

    def derivative(self, axis: int) -> "HoloPoly":
        """Exact ``d/dz_axis`` (1-based axis)."""
        j = _check_axis(axis, self._n)
        table = {
            alpha.shifted(j, -1): alpha[j] * c for alpha, c in self._coeffs.items() if alpha[j] > 0
        }
        return HoloPoly(self._n, table)

    def truncate(self, max_degree: int) -> "HoloPoly":
        """Drop every monomial of total degree above ``max_degree``."""
        return HoloPoly(self._n, {a: c for a, c in self._coeffs.items() if a.degree <= max_degree})

    def abs_coefficients(self) -> "HoloPoly":
        """Polynomial with every coefficient replaced by its modulus."""
        return HoloPoly(self._n, {a: abs(c) for a, c in self._coeffs.items()})

    # -- evaluation -------------------------------------------------------

    @functools.cached_property
    def _packed(self) -> Tuple[np.ndarray, np.ndarray]:
        if not self._coeffs:
            return np.zeros((0, self._n), dtype=np.int64), np.zeros(0, dtype=complex)
        items = self.terms()
        exps = np.array([a for a, _ in items], dtype=np.int64).reshape(len(items), self._n)
        return exps, np.array([c for _, c in items], dtype=complex)

    def _evaluate_flat(self, pts: np.ndarray) -> np.ndarray:
        exps, coeffs = self._packed
        out = np.zeros(pts.shape[0], dtype=complex)
        if coeffs.size == 0 or pts.shape[0] == 0:
            return out
        top = int(exps.max())
        block = max(1, _EVAL_BLOCK // max(1, coeffs.size * self._n))
        axes = np.arange(self._n)
        for start in range(0, pts.shape[0], block):
            chunk = pts[start : start + block]
            powers = np.ones(chunk.shape + (top + 1,), dtype=complex)
            for e in range(1, top + 1):
                powers[..., e] = powers[..., e - 1] * chunk
            # (points, terms, n) -> product over n -> weighted sum over terms
            mono = powers[:, axes[None, :], exps].prod(axis=2)
            out[start : start + block] = mono @ coeffs
        return out

    def evaluate(self, z: Any) -> Union[complex, np.ndarray]:
        """Evaluate at one point ``(n,)`` or an array of points ``(..., n)``.

        Raises:
            ValueError: On a dimension mismatch.
        """
        pts, lead = as_points(z, self._n)
        values = self._evaluate_flat(pts)
        return complex(values[0]) if lead == () else values.reshape(lead)

    __call__ = evaluate

    def ball_majorant(self, centers: Any, radius: Union[float, np.ndarray]) -> np.ndarray:
        """Upper bound of ``|p|`` on each ball ``B(center, radius)``.

        Uses ``sum |c_alpha| prod (|center_j| + radius)^alpha_j``.
        """
        pts, lead = as_points(centers, self._n)
        r = np.broadcast_to(np.asarray(radius, dtype=float), lead).reshape(-1, 1)
        shifted = np.abs(pts) + r
        values = self.abs_coefficients()._evaluate_flat(shifted.astype(complex)).real
        return values.reshape(lead)

    def majorant(self, radius: float) -> float:
        """Upper bound of ``|p|`` on the ball ``B(0, radius)``."""
        return float(self.ball_majorant(np.zeros(self._n), radius))

    # -- serialisation ----------------------------------------------------

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self._n,
            "terms": [
                {"alpha": list(alpha), "re": c.real, "im": c.imag} for alpha, c in self.terms()
            ],
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "HoloPoly":
        """Parse ``{"n": int, "terms": [{"alpha": [...], "re": x, "im": y}]}``.

        Raises:
            ValueError: If required keys are missing.
        """
        try:
            n = int(data["n"])
            terms = data.get("terms", [])
            table: Dict[Tuple[int, ...], complex] = {}
            for term in terms:
                key = tuple(int(e) for e in term["alpha"])
                table[key] = table.get(key, 0j) + complex(
                    float(term.get("re", 0.0)), float(term.get("im", 0.0))
                )
        except (KeyError, TypeError) as exc:
            raise ValueError(f"Malformed polynomial JSON: {exc}") from exc
        return cls(n, table)
