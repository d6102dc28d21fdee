"""Polynomial-times-exponential sums ``sum_t p_t(z) exp(lambda_t . z + c_t)``.

These represent the chart quotients of peak-section combinations: each
peak section, divided by the reference section and pulled back through a
rescaled chart, is an exponential of an affine function times a low
degree polynomial. The class is closed under differentiation and admits
exact Taylor expansion at the origin.
"""

from __future__ import annotations

from dataclasses import dataclass
from numbers import Number
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.special import gammaln

from qtransverse.polycore.holopoly import HoloPoly, _check_axis, as_points
from qtransverse.polycore.multiindex import graded_exponents

_Key = Tuple[Tuple[complex, ...], complex]


@dataclass(frozen=True)
class ExpTerm:
    """One summand ``poly(z) * exp(lam . z + c)``."""

    poly: HoloPoly
    lam: Tuple[complex, ...]
    c: complex = 0j

    @property
    def key(self) -> _Key:
        return (self.lam, self.c)


def _exp_series(n: int, lam: Sequence[complex], c: complex, max_degree: int) -> HoloPoly:
    """Degree ``<= max_degree`` Taylor polynomial of ``exp(lam . z + c)``.

    Coefficients ``e^c lam^beta / beta!`` are formed in log-modulus /
    argument form, so high orders neither overflow nor lose the zero pattern
    of vanishing ``lam_j``.
    """
    exps = graded_exponents(n, max_degree)
    lam_arr = np.asarray(lam, dtype=complex)
    mod = np.abs(lam_arr)
    log_mod = np.where(mod > 0, np.log(np.where(mod > 0, mod, 1.0)), -np.inf)
    arg = np.angle(lam_arr)
    # 0 * (-inf) must count as log(1) for beta_j = 0
    with np.errstate(invalid="ignore"):
        log_terms = np.where(exps > 0, exps * log_mod[None, :], 0.0)
    log_abs = log_terms.sum(axis=1) - gammaln(exps + 1.0).sum(axis=1) + complex(c).real
    phase = exps @ arg + complex(c).imag
    coeffs = np.exp(log_abs) * np.exp(1j * phase)
    keep = coeffs != 0
    return HoloPoly(n, {tuple(row): val for row, val in zip(exps[keep].tolist(), coeffs[keep])})


class ExpAffinePoly:
    """Finite sum of :class:`ExpTerm`.

    Terms sharing the same exponent ``(lam, c)`` are merged; terms whose
    polynomial vanishes are dropped.

    Args:
        n: Number of complex variables.
        terms: Iterable of :class:`ExpTerm` or ``(poly, lam, c)`` triples.
    """

    __array_ufunc__ = None

    def __init__(self, n: int, terms: Iterable[Union[ExpTerm, Tuple[Any, ...]]] = ()) -> None:
        if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
            raise ValueError(f"n must be a positive integer, got {n!r}")
        self._n = int(n)
        merged: Dict[_Key, HoloPoly] = {}
        for raw in terms:
            term = raw if isinstance(raw, ExpTerm) else ExpTerm(*raw)
            lam = tuple(complex(x) for x in term.lam)
            if len(lam) != self._n or term.poly.n != self._n:
                raise ValueError(f"Term dimension mismatch, expected n={self._n}")
            key = (lam, complex(term.c))
            merged[key] = merged[key] + term.poly if key in merged else term.poly
        self._terms: List[ExpTerm] = [
            ExpTerm(p, key[0], key[1]) for key, p in merged.items() if not p.is_zero()
        ]

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_holopoly(cls, poly: HoloPoly) -> "ExpAffinePoly":
        return cls(poly.n, [ExpTerm(poly, (0j,) * poly.n, 0j)])

    @classmethod
    def exponential(
        cls,
        n: int,
        lam: Sequence[complex],
        c: complex = 0j,
        poly: Optional[HoloPoly] = None,
    ) -> "ExpAffinePoly":
        """``poly(z) * exp(lam . z + c)`` (``poly`` defaults to 1)."""
        p = poly if poly is not None else HoloPoly.constant(n, 1.0)
        return cls(n, [ExpTerm(p, tuple(lam), c)])

    # -- properties -------------------------------------------------------

    @property
    def n(self) -> int:
        return self._n

    @property
    def terms(self) -> List[ExpTerm]:
        return list(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_polynomial(self) -> bool:
        return all(not any(t.lam) and t.c == 0 for t in self._terms)

    def to_holopoly(self) -> HoloPoly:
        """Return the polynomial part.

        Raises:
            ValueError: If some term carries a nontrivial exponential.
        """
        if not self.is_polynomial():
            raise ValueError("ExpAffinePoly has exponential terms; use taylor() instead")
        out = HoloPoly.zero(self._n)
        for t in self._terms:
            out = out + t.poly
        return out

    def __repr__(self) -> str:
        return f"ExpAffinePoly(n={self._n}, terms={len(self._terms)})"

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other: Any) -> Optional["ExpAffinePoly"]:
        if isinstance(other, ExpAffinePoly):
            if other._n != self._n:
                raise ValueError(f"Dimension mismatch: n={self._n} vs n={other._n}")
            return other
        if isinstance(other, HoloPoly):
            if other.n != self._n:
                raise ValueError(f"Dimension mismatch: n={self._n} vs n={other.n}")
            return ExpAffinePoly.from_holopoly(other)
        if isinstance(other, (Number, np.number)):
            return ExpAffinePoly.from_holopoly(HoloPoly.constant(self._n, other))  # type: ignore[arg-type]
        return None

    def __add__(self, other: Any) -> "ExpAffinePoly":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return ExpAffinePoly(self._n, self._terms + rhs._terms)

    __radd__ = __add__

    def __neg__(self) -> "ExpAffinePoly":
        return ExpAffinePoly(self._n, [ExpTerm(-t.poly, t.lam, t.c) for t in self._terms])

    def __sub__(self, other: Any) -> "ExpAffinePoly":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self, other: Any) -> "ExpAffinePoly":
        return (-self) + other

    def __mul__(self, other: Any) -> "ExpAffinePoly":
        if isinstance(other, (Number, np.number)):
            return ExpAffinePoly(
                self._n, [ExpTerm(t.poly * other, t.lam, t.c) for t in self._terms]
            )
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        out: List[ExpTerm] = []
        for a in self._terms:
            for b in rhs._terms:
                lam = tuple(x + y for x, y in zip(a.lam, b.lam))
                out.append(ExpTerm(a.poly * b.poly, lam, a.c + b.c))
        return ExpAffinePoly(self._n, out)

    __rmul__ = __mul__

    # -- calculus ---------------------------------------------------------

    def derivative(self, axis: int) -> "ExpAffinePoly":
        """Exact ``d/dz_axis``: ``(dp + lam_j p) exp(...)`` termwise."""
        j = _check_axis(axis, self._n)
        return ExpAffinePoly(
            self._n,
            [ExpTerm(t.poly.derivative(axis) + t.poly * t.lam[j], t.lam, t.c) for t in self._terms],
        )

    def taylor(self, max_degree: int) -> HoloPoly:
        """Exact Taylor polynomial of degree ``<= max_degree`` at the origin."""
        if max_degree < 0:
            raise ValueError(f"max_degree must be >= 0, got {max_degree}")
        out = HoloPoly.zero(self._n)
        for t in self._terms:
            if not any(t.lam):
                series = HoloPoly.constant(self._n, complex(np.exp(t.c)))
            else:
                series = _exp_series(self._n, t.lam, t.c, max_degree)
            out = out + (t.poly.truncate(max_degree) * series).truncate(max_degree)
        return out

    # -- evaluation -------------------------------------------------------

    def evaluate(self, z: Any) -> Union[complex, np.ndarray]:
        """Evaluate at one point ``(n,)`` or points ``(..., n)``.

        Raises:
            ValueError: On a dimension mismatch.
        """
        pts, lead = as_points(z, self._n)
        out = np.zeros(pts.shape[0], dtype=complex)
        for t in self._terms:
            expo = pts @ np.asarray(t.lam, dtype=complex) + t.c
            out += t.poly._evaluate_flat(pts) * np.exp(expo)
        return complex(out[0]) if lead == () else out.reshape(lead)

    __call__ = evaluate

    def ball_majorant(self, centers: Any, radius: Union[float, np.ndarray]) -> np.ndarray:
        """Upper bound of ``|f|`` on each ball ``B(center, radius)``.

        Each term contributes its polynomial majorant times
        ``exp(Re(lam . center + c) + |lam| radius)``.
        """
        pts, lead = as_points(centers, self._n)
        r = np.broadcast_to(np.asarray(radius, dtype=float), lead).reshape(-1)
        total = np.zeros(pts.shape[0])
        for t in self._terms:
            lam = np.asarray(t.lam, dtype=complex)
            growth = (pts @ lam + t.c).real + np.linalg.norm(lam) * r
            total += t.poly.ball_majorant(pts, r) * np.exp(growth)
        return total.reshape(lead)

    def majorant(self, radius: float) -> float:
        return float(self.ball_majorant(np.zeros(self._n), radius))

    # -- serialisation ----------------------------------------------------

    def to_dict(self) -> Dict[str, Any]:
        """JSON form: polynomial terms plus ``lambda`` and ``c`` per term."""
        out = []
        for t in self._terms:
            out.append(
                {
                    "poly": t.poly.to_dict(),
                    "lambda": [[x.real, x.imag] for x in t.lam],
                    "c": [t.c.real, t.c.imag],
                }
            )
        return {"n": self._n, "terms": out}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "ExpAffinePoly":
        try:
            n = int(data["n"])
            terms = []
            for term in data.get("terms", []):
                lam = tuple(complex(float(a), float(b)) for a, b in term["lambda"])
                c = complex(float(term["c"][0]), float(term["c"][1]))
                terms.append(ExpTerm(HoloPoly.from_dict(term["poly"]), lam, c))
        except (KeyError, TypeError, IndexError) as exc:
            raise ValueError(f"Malformed ExpAffinePoly JSON: {exc}") from exc
        return cls(n, terms)


def as_function(f: Any) -> Union[HoloPoly, ExpAffinePoly]:
    """Validate that ``f`` is one of the supported representations."""
    if isinstance(f, (HoloPoly, ExpAffinePoly)):
        return f
    raise TypeError(f"Expected HoloPoly or ExpAffinePoly, got {type(f).__name__}")
