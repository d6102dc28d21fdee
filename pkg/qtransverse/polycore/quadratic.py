"""Real quadratic potentials and their pluriharmonic split.

A real quadratic in ``z in C^n`` is written

    phi(z) = a + Re(sum_i a_i z_i) + Re(sum_ij a_ij z_i z_j) + sum_ij b_ij z_i conj(z_j)

with ``a_ij`` symmetric and ``b`` Hermitian. The holomorphic part
``u(z) = a + sum_i a_i z_i + sum_ij a_ij z_i z_j`` satisfies
``phi - Re u = z^* B z`` with ``B = b^T``; when ``B`` is positive definite a
Cholesky factor ``T`` gives ``phi - Re u = |T z|^2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Dict, Sequence, Union

import numpy as np
import scipy.linalg

from qtransverse.polycore.holopoly import HoloPoly, as_points
from qtransverse.polycore.multiindex import MultiIndex

_SYMMETRY_TOL = 1e-12


@dataclass(frozen=True)
class RealQuadratic:
    """Real-valued quadratic polynomial in ``z`` and ``conj(z)``.

    Attributes:
        a: Real constant.
        linear: Complex ``a_i``, shape ``(n,)``.
        holomorphic: Complex symmetric ``a_ij``, shape ``(n, n)``.
        hermitian: Hermitian ``b_ij``, shape ``(n, n)``.
    """

    a: float
    linear: np.ndarray
    holomorphic: np.ndarray
    hermitian: np.ndarray

    def __post_init__(self) -> None:
        lin = np.atleast_1d(np.asarray(self.linear, dtype=complex))
        hol = np.atleast_2d(np.asarray(self.holomorphic, dtype=complex))
        her = np.atleast_2d(np.asarray(self.hermitian, dtype=complex))
        n = lin.shape[0]
        if hol.shape != (n, n) or her.shape != (n, n):
            raise ValueError(f"Quadratic parts must have shape ({n}, {n})")
        if not np.allclose(hol, hol.T, atol=_SYMMETRY_TOL):
            raise ValueError("Holomorphic quadratic part must be symmetric")
        if not np.allclose(her, her.conj().T, atol=_SYMMETRY_TOL):
            raise ValueError("Hermitian part must satisfy b_ij = conj(b_ji)")
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "linear", lin)
        object.__setattr__(self, "holomorphic", hol)
        object.__setattr__(self, "hermitian", her)

    @property
    def n(self) -> int:
        return int(self.linear.shape[0])

    @classmethod
    def from_hermitian(cls, hermitian: Sequence[Sequence[complex]]) -> "RealQuadratic":
        her = np.atleast_2d(np.asarray(hermitian, dtype=complex))
        n = her.shape[0]
        return cls(0.0, np.zeros(n), np.zeros((n, n)), her)

    def evaluate(self, z: Any) -> Union[float, np.ndarray]:
        pts, lead = as_points(z, self.n)
        value = (
            self.a
            + (pts @ self.linear).real
            + np.einsum("ni,ij,nj->n", pts, self.holomorphic, pts).real
            + np.einsum("ni,ij,nj->n", pts, self.hermitian, pts.conj()).real
        )
        return float(value[0]) if lead == () else value.reshape(lead)

    __call__ = evaluate

    def to_dict(self) -> Dict[str, Any]:
        def pairs(arr: np.ndarray) -> Any:
            return np.stack([arr.real, arr.imag], axis=-1).tolist()

        return {
            "n": self.n,
            "a": self.a,
            "linear": pairs(self.linear),
            "holomorphic": pairs(self.holomorphic),
            "hermitian": pairs(self.hermitian),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RealQuadratic":
        def unpair(x: Any) -> np.ndarray:
            arr = np.asarray(x, dtype=float)
            return arr[..., 0] + 1j * arr[..., 1]

        try:
            return cls(
                float(data["a"]),
                unpair(data["linear"]),
                unpair(data["holomorphic"]),
                unpair(data["hermitian"]),
            )
        except (KeyError, IndexError) as exc:
            raise ValueError(f"Malformed RealQuadratic JSON: {exc}") from exc


@dataclass(frozen=True)
class PluriharmonicSplit:
    """``phi - Re u = (T z)^* (T z)`` with ``B = T^* T``."""

    u: HoloPoly
    B: np.ndarray
    T: np.ndarray

    def residual(self, phi: RealQuadratic, z: Any) -> np.ndarray:
        """``phi(z) - Re u(z) - |T z|^2`` at points ``(..., n)``."""
        pts, lead = as_points(z, phi.n)
        tz = pts @ self.T.T
        res = phi.evaluate(pts) - np.real(self.u.evaluate(pts)) - np.sum(np.abs(tz) ** 2, axis=1)
        return np.asarray(res).reshape(lead)


def pluriharmonic_split(phi: RealQuadratic) -> PluriharmonicSplit:
    """Split off the pluriharmonic part of a real quadratic.

    Raises:
        ValueError: If the Hermitian part is not positive definite; the
            message reports the smallest eigenvalue.
    """
    n = phi.n
    B = phi.hermitian.T.copy()
    smallest = float(np.linalg.eigvalsh(B)[0])
    if smallest <= 0:
        raise ValueError(
            f"Hermitian part is not positive definite (smallest eigenvalue {smallest:.6g})"
        )
    T = scipy.linalg.cholesky(B, lower=False)

    table: Dict[MultiIndex, complex] = {MultiIndex.zero(n): phi.a}
    for i in range(n):
        table[MultiIndex.unit(n, i)] = phi.linear[i]
        for j in range(i, n):
            alpha = MultiIndex.unit(n, i).shifted(j, 1)
            # z_i z_j appears twice in sum_ij for i != j
            table[alpha] = phi.holomorphic[i, j] * (1.0 if i == j else 2.0)
    return PluriharmonicSplit(u=HoloPoly(n, table), B=B, T=T)
