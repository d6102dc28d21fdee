"""The flat model: the unit ball of ``C^n`` with ``phi(z) = |z|^2 - 1``.

Peak sections are exact here. With ``<z, w> = sum z_i conj(w_i)`` the
section ``sigma_p(z) = exp(k (<z, p> - 1))`` has weighted modulus
``|sigma_p| e^{-k phi / 2} = exp(-k |z - p|^2 / 2) = exp(-d_k(z, p)^2 / 4)``
with no correction terms.

Charts are ``z = p + eps U zeta`` with ``eps = (2k)^{-1/2}`` and ``U``
unitary, ``U e1 = p``; one chart unit is one ``d_k`` unit and the wall
``{Re zeta1 = 0}`` is tangent to the sphere at ``zeta = 0``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from qtransverse.levi import SphereCellBounds, Sphere
from qtransverse.polycore import ExpAffinePoly, ExpTerm, HoloPoly, MultiIndex

logger = logging.getLogger(__name__)

#: Upper bound on ``points * terms * n`` handled per numpy pass.
_PAIR_BLOCK = 1 << 21

#: Report-header facts of the flat model.
FLAT_MODEL_FACTS: Dict[str, Any] = {
    "potential": "phi(z) = |z|^2 - 1",
    "metric": "g_phi = 2 * euclidean",
    "peak_sections": "exact: sigma_p(z) = exp(k (<z, p> - 1))",
    "correction_terms": 0.0,
    "peak_decay_exponent": 0.25,
    "weinstein_potential": "Phi_g = g(phi) (documentation only, not evaluated)",
}


@dataclass(frozen=True)
class FlatModel:
    """Flat model of complex dimension ``n`` at tensor power ``k``."""

    n: int
    k: float

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if not self.k > 0:
            raise ValueError(f"k must be > 0, got {self.k}")

    @property
    def eps(self) -> float:
        """Euclidean length of one ``d_k`` unit."""
        return 1.0 / math.sqrt(2.0 * self.k)

    @property
    def sphere(self) -> Sphere:
        return Sphere(self.n, self.k)

    def phi(self, z: Any) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        return np.sum(np.abs(z) ** 2, axis=-1) - 1.0

    def distance(self, z: Any, w: Any) -> np.ndarray:
        diff = np.asarray(z, dtype=complex) - np.asarray(w, dtype=complex)
        return math.sqrt(2.0 * self.k) * np.linalg.norm(diff, axis=-1)

    def as_dict(self) -> Dict[str, Any]:
        return {"n": self.n, "k": self.k, **FLAT_MODEL_FACTS}


def chart_frame(p: Any) -> np.ndarray:
    """Unitary ``U`` with ``U e1 = p`` for a unit vector ``p``.

    Raises:
        ValueError: If ``p`` is not a unit vector.
    """
    p = np.asarray(p, dtype=complex).reshape(-1)
    if abs(np.linalg.norm(p) - 1.0) > 1e-9:
        raise ValueError(f"Chart centers must be unit vectors, got |p| = {np.linalg.norm(p):.12g}")
    n = p.size
    pivot = int(np.argmax(np.abs(p)))
    others = [m for m in range(n) if m != pivot]
    basis = np.eye(n, dtype=complex)
    M = np.column_stack([p] + [basis[:, m] for m in others])
    Q, R = np.linalg.qr(M)
    Q[:, 0] *= R[0, 0]
    return Q


@dataclass(frozen=True)
class PeakSection:
    """``sigma_p`` (``kind = 0``) or the linear section ``sigma_p zeta_r`` (``kind = r >= 2``)."""

    center: Tuple[complex, ...]
    k: float
    kind: int = 0

    def __post_init__(self) -> None:
        center = tuple(complex(x) for x in np.asarray(self.center, dtype=complex).reshape(-1))
        object.__setattr__(self, "center", center)
        if self.kind != 0 and not 2 <= self.kind <= len(center):
            raise ValueError(f"kind must be 0 or lie in [2, {len(center)}], got {self.kind}")


def peak_section_eval(
    model: FlatModel, section: PeakSection, z: Any
) -> Tuple[np.ndarray, np.ndarray]:
    """Trivialized value and weighted modulus of a peak section.

    Both are formed from ``log |sigma_p|`` and its argument, so the
    weighted modulus never overflows.

    Returns:
        ``(value, weighted_modulus)`` with the leading shape of ``z``.
    """
    p = np.asarray(section.center, dtype=complex)
    z = np.asarray(z, dtype=complex)
    if z.shape[-1] != model.n or p.size != model.n:
        raise ValueError(f"Point dimension mismatch: expected n={model.n}")
    inner = z @ np.conj(p)
    log_mod = model.k * (inner.real - 1.0)
    arg = model.k * inner.imag
    weighted = np.exp(log_mod - 0.5 * model.k * model.phi(z))
    factor: Any = 1.0
    if section.kind:
        U = chart_frame(p)
        factor = ((z - p) @ np.conj(U[:, section.kind - 1])) / model.eps
    with np.errstate(over="ignore"):
        value = np.exp(log_mod) * np.exp(1j * arg) * factor
    return value, weighted * np.abs(factor)


def _chunks(count: int, terms: int, n: int) -> Iterator[slice]:
    step = max(1, _PAIR_BLOCK // max(1, terms * n))
    for start in range(0, count, step):
        yield slice(start, min(start + step, count))


class PeakCombination:
    """``s = sum_i sigma_{p_i} (a_i0 + sum_{r>=2} a_ir zeta^{(i)}_r)``.

    ``coeffs[i] = (a_i0, a_i2, ..., a_in)``; ``zeta^{(i)}`` are the chart
    coordinates at ``p_i``. Instances are immutable and implement the
    sphere-section protocol of :func:`qtransverse.levi.certified_min`.
    """

    def __init__(
        self,
        model: FlatModel,
        centers: Any = None,
        coeffs: Any = None,
        frames: Optional[np.ndarray] = None,
    ) -> None:
        n = model.n
        self.model = model
        empty = np.zeros((0, n), dtype=complex)
        self.centers = empty if centers is None else np.array(centers, dtype=complex).reshape(-1, n)
        self.coeffs = empty.copy() if coeffs is None else np.array(coeffs, dtype=complex).reshape(-1, n)
        if self.centers.shape != self.coeffs.shape:
            raise ValueError("centers and coeffs must both have shape (P, n)")
        if frames is None:
            built = [chart_frame(p) for p in self.centers]
            frames = np.stack(built) if built else np.zeros((0, n, n), dtype=complex)
        self.frames = np.array(frames, dtype=complex)
        for arr in (self.centers, self.coeffs, self.frames):
            arr.setflags(write=False)
        # d/dz_m of the linear factor: sum_r a_r conj(U[m, r]) / eps
        lin_frames = np.conj(self.frames[:, :, 1:])
        self._lin_grad = np.einsum("pmr,pr->pm", lin_frames, self.coeffs[:, 1:]) / model.eps

    # -- sphere-section protocol -----------------------------------------

    @property
    def n(self) -> int:
        return self.model.n

    @property
    def k(self) -> float:
        return self.model.k

    def __len__(self) -> int:
        return int(self.centers.shape[0])

    @classmethod
    def zero(cls, model: FlatModel) -> "PeakCombination":
        return cls(model)

    def with_point(self, center: Any, coeff: Any) -> "PeakCombination":
        """Return ``s + sigma_p (a0 + sum_r a_r zeta_r)``."""
        p = np.asarray(center, dtype=complex).reshape(1, self.n)
        a = np.asarray(coeff, dtype=complex).reshape(1, self.n)
        frame = chart_frame(p[0])[None]
        return PeakCombination(
            self.model,
            np.concatenate([self.centers, p]),
            np.concatenate([self.coeffs, a]),
            np.concatenate([self.frames, frame]),
        )

    def scaled(self, factor: complex) -> "PeakCombination":
        return PeakCombination(self.model, self.centers, self.coeffs * factor, self.frames)

    # -- evaluation -------------------------------------------------------

    def _weighted(self, z: np.ndarray, gradient: bool) -> Tuple[np.ndarray, Optional[np.ndarray]]:
        """Weighted value ``e^{-k phi/2} s`` and gradient ``e^{-k phi/2} ds`` at ``(N, n)``."""
        N, n = z.shape
        k, eps = self.k, self.model.eps
        W = np.zeros(N, dtype=complex)
        G = np.zeros((N, n), dtype=complex) if gradient else None
        P = len(self)
        if P == 0:
            return W, G
        conj_c = np.conj(self.centers)
        for sl in _chunks(N, P, n):
            zc = z[sl]
            diff = zc[:, None, :] - self.centers[None, :, :]
            sq = np.sum(np.abs(diff) ** 2, axis=-1)
            e = np.exp(-0.5 * k * sq + 1j * k * (zc @ conj_c.T).imag)
            zeta = np.einsum("bpm,pmr->bpr", diff, np.conj(self.frames[:, :, 1:])) / eps
            lin = self.coeffs[None, :, 0] + np.einsum("bpr,pr->bp", zeta, self.coeffs[:, 1:])
            W[sl] = np.sum(e * lin, axis=1)
            if G is not None:
                G[sl] = k * (e * lin) @ conj_c + e @ self._lin_grad
        return W, G

    def weighted(self, z: Any) -> np.ndarray:
        """``e^{-k phi(z)/2} s(z)``; its modulus is the pointwise norm of ``s``."""
        pts = np.asarray(z, dtype=complex)
        flat = pts.reshape(-1, self.n)
        W, _ = self._weighted(flat, gradient=False)
        return W.reshape(pts.shape[:-1])

    def evaluate(self, z: Any) -> np.ndarray:
        """Trivialized value ``s(z)``."""
        pts = np.asarray(z, dtype=complex)
        with np.errstate(over="ignore"):
            return self.weighted(pts) * np.exp(0.5 * self.k * self.model.phi(pts))

    def weighted_gradient(self, z: Any) -> Tuple[np.ndarray, np.ndarray]:
        """``(e^{-k phi/2} s, e^{-k phi/2} ds)`` at points ``(N, n)``."""
        flat = np.asarray(z, dtype=complex).reshape(-1, self.n)
        W, G = self._weighted(flat, gradient=True)
        return W, G

    def _xi_norm(self, points: np.ndarray, G: np.ndarray) -> np.ndarray:
        along = np.sum(G * points, axis=1)
        return np.sqrt(np.maximum(0.0, np.sum(np.abs(G) ** 2, axis=1) - np.abs(along) ** 2))

    def transversality(self, points: np.ndarray) -> np.ndarray:
        """``|s| + |ds restricted to xi|`` in the ``k``-rescaled metric at unit points."""
        pts = np.asarray(points, dtype=complex).reshape(-1, self.n)
        W, G = self._weighted(pts, gradient=True)
        return np.abs(W) + self.model.eps * self._xi_norm(pts, G)

    def chart_bounds(self, points: np.ndarray, radius: np.ndarray) -> SphereCellBounds:
        """Chart data of ``s / sigma_c`` at unit points ``c`` over chart balls of ``radius``.

        A term centered at ``q`` at ``d_k`` distance ``d`` from ``c`` pulls
        back to ``exp(lam . zeta + c_q) (a0 + linear)`` with
        ``|exp(c_q)| = e^{-d^2/4}`` and ``|lam| = d / 2``; its linear factor
        is bounded by ``|a0| + |a_lin| (d + r)``.
        """
        pts = np.asarray(points, dtype=complex).reshape(-1, self.n)
        r = np.broadcast_to(np.asarray(radius, dtype=float), (pts.shape[0],))
        W, G = self._weighted(pts, gradient=True)
        value = np.abs(W)
        xi = self.model.eps * self._xi_norm(pts, G)
        sup = np.zeros(pts.shape[0])
        lip = np.zeros(pts.shape[0])
        lip2 = np.zeros(pts.shape[0])
        if len(self):
            A = np.abs(self.coeffs[:, 0])
            B = np.linalg.norm(self.coeffs[:, 1:], axis=1)
            scale = math.sqrt(2.0 * self.k)
            for sl in _chunks(pts.shape[0], len(self), self.n):
                d = scale * np.linalg.norm(pts[sl, None, :] - self.centers[None, :, :], axis=-1)
                rr = r[sl, None]
                E = np.exp(-0.25 * d * d + 0.5 * d * rr)
                amp = A[None, :] + B[None, :] * (d + rr)
                sup[sl] = np.sum(E * amp, axis=1)
                lip[sl] = np.sum(E * (0.5 * d * amp + B[None, :]), axis=1)
                lip2[sl] = np.sum(E * (0.25 * d * d * amp + d * B[None, :]), axis=1)
        return SphereCellBounds(value=value, xi=xi, sup=sup, lipschitz=lip, xi_lipschitz=lip2)

    # -- chart quotients --------------------------------------------------

    def chart_quotient(
        self, p: Any, frame: Optional[np.ndarray] = None, *, cutoff: float = math.inf, radius: float = 1.25
    ) -> Tuple[ExpAffinePoly, float]:
        """``(s / sigma_p)(p + eps U zeta)`` as an exponential sum in ``zeta``.

        Terms farther than ``cutoff`` (``d_k``) from ``p`` are dropped.

        Returns:
            The quotient and a bound for the dropped terms on ``|zeta| <= radius``.
        """
        p = np.asarray(p, dtype=complex).reshape(-1)
        U = chart_frame(p) if frame is None else np.asarray(frame, dtype=complex)
        n, k, eps = self.n, self.k, self.model.eps
        terms: List[ExpTerm] = []
        tail = 0.0
        if len(self) == 0:
            return ExpAffinePoly.from_holopoly(HoloPoly.zero(n)), 0.0
        d_all = self.model.distance(self.centers, p[None, :])
        zero = MultiIndex.zero(n)
        for q, a, Uq, d in zip(self.centers, self.coeffs, self.frames, d_all):
            if d > cutoff:
                amp = abs(a[0]) + float(np.linalg.norm(a[1:])) * (d + radius)
                tail += amp * math.exp(-0.25 * d * d + 0.5 * d * radius)
                continue
            c = k * (np.vdot(q, p) - 1.0)
            lam = k * eps * (U.T @ np.conj(q - p))
            const = a[0] + np.sum(a[1:] * ((p - q) @ np.conj(Uq[:, 1:]))) / eps
            linear = a[1:] @ (np.conj(Uq[:, 1:]).T @ U)
            table = {zero: complex(const)}
            for j in range(n):
                table[MultiIndex.unit(n, j)] = complex(linear[j])
            terms.append(ExpTerm(HoloPoly(n, table), tuple(lam), complex(c)))
        return ExpAffinePoly(n, terms), tail

    # -- serialisation ----------------------------------------------------

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "k": self.k,
            "centers": [[[z.real, z.imag] for z in row] for row in self.centers],
            "coeffs": [[[a.real, a.imag] for a in row] for row in self.coeffs],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "PeakCombination":
        model = FlatModel(int(data["n"]), float(data["k"]))
        centers = [[complex(re, im) for re, im in row] for row in data.get("centers", [])]
        coeffs = [[complex(re, im) for re, im in row] for row in data.get("coeffs", [])]
        return cls(model, centers or None, coeffs or None)

    @classmethod
    def single(cls, model: FlatModel, p: Sequence[complex], coeff: complex = 1.0) -> "PeakCombination":
        """One base peak section ``coeff * sigma_p``."""
        a = np.zeros(model.n, dtype=complex)
        a[0] = coeff
        return cls.zero(model).with_point(p, a)
