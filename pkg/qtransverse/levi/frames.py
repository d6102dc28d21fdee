"""Levi frames and the pointwise transversality functional."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence, Union

import numpy as np

from qtransverse.levi.models import HypersurfaceModel, Wall, check_on_surface
from qtransverse.polycore import ExpAffinePoly, HoloPoly, as_function

_DEGENERATE = 1e-8


@dataclass(frozen=True)
class LeviFrame:
    """Orthonormal basis of the maximal complex tangent space at ``base``.

    Attributes:
        base: Point on the hypersurface, shape ``(n,)``.
        vectors: Frame vectors as columns, shape ``(n, n - 1)``.
    """

    base: np.ndarray
    vectors: np.ndarray

    @property
    def rank(self) -> int:
        return int(self.vectors.shape[1])

    def rotated(self, unitary: Any) -> "LeviFrame":
        """Same subspace, basis changed by an ``(n-1) x (n-1)`` unitary."""
        u = np.asarray(unitary, dtype=complex)
        return LeviFrame(self.base, self.vectors @ u)


def levi_frame(model: HypersurfaceModel, point: Any) -> LeviFrame:
    """Deterministic Levi frame at ``point``.

    The wall frame is ``e2, ..., en``. On the sphere the frame is obtained by
    Gram-Schmidt on ``e1, ..., en`` projected onto the complex orthogonal
    complement of ``point``.

    Raises:
        ValueError: If the point is off the hypersurface.
    """
    z = check_on_surface(model, point)
    n = model.n
    if isinstance(model, Wall):
        return LeviFrame(z, np.eye(n, dtype=complex)[:, 1:])
    p = z / np.linalg.norm(z)
    basis = []
    for j in range(n):
        v = np.zeros(n, dtype=complex)
        v[j] = 1.0
        v = v - np.vdot(p, v) * p
        for b in basis:
            v = v - np.vdot(b, v) * b
        norm = np.linalg.norm(v)
        if norm > _DEGENERATE:
            basis.append(v / norm)
        if len(basis) == n - 1:
            break
    vectors = np.stack(basis, axis=1) if basis else np.zeros((n, 0), dtype=complex)
    return LeviFrame(z, vectors)


def transversality_at(
    f: Union[HoloPoly, ExpAffinePoly], point: Any, frame: LeviFrame
) -> float:
    """``|f(z)| + sqrt(sum_v |df(z) v|^2)`` over the frame vectors ``v``."""
    f = as_function(f)
    z = np.asarray(point, dtype=complex).reshape(-1)
    value = abs(f.evaluate(z))
    if frame.rank == 0:
        return float(value)
    grad = np.array([f.derivative(j).evaluate(z) for j in range(1, f.n + 1)])
    along = grad @ frame.vectors
    return float(value + np.linalg.norm(along))


def wall_transversality(
    f: Union[HoloPoly, ExpAffinePoly], points: Any, derivatives: Sequence[Any] = ()
) -> np.ndarray:
    """Vectorised ``T`` on the wall frame at points ``(N, n)``.

    ``derivatives`` may pass precomputed ``d f / d z_v`` for ``v = 2..n``.
    """
    f = as_function(f)
    pts = np.asarray(points, dtype=complex).reshape(-1, f.n)
    derivs = list(derivatives) or [f.derivative(v) for v in range(2, f.n + 1)]
    value = np.abs(f.evaluate(pts))
    if not derivs:
        return value
    along = np.stack([d.evaluate(pts) for d in derivs], axis=1)
    return value + np.linalg.norm(along, axis=1)


