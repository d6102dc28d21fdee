"""Global checks of a peak combination: sup over ``{phi <= 1}`` and the sphere certificate."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, Iterator, Optional

import numpy as np

from qtransverse.levi import TransversalityCertificate, certified_min
from qtransverse.polycore import SupBound

from .flat import PeakCombination

logger = logging.getLogger(__name__)

#: ``{phi <= 1}`` is the ball of this radius.
SUP_RADIUS = math.sqrt(2.0)

#: Grid points per block of the sup scan.
_SUP_BLOCK = 1 << 15


def ball_grid(n: int, h: float, reach: float) -> Iterator[np.ndarray]:
    """Points of the cubic grid of step ``h`` in ``R^{2n}`` within ``reach`` of 0, in blocks."""
    count = int(math.ceil(reach / h))
    axis = np.arange(-count, count + 1) * h
    m = 2 * n
    rest = np.stack(np.meshgrid(*([axis] * (m - 1)), indexing="ij"), axis=-1).reshape(-1, m - 1)
    rest = rest[np.linalg.norm(rest, axis=1) <= reach]
    for x0 in axis:
        block = rest[np.sum(rest**2, axis=1) <= reach * reach - x0 * x0]
        for start in range(0, block.shape[0], _SUP_BLOCK):
            part = block[start : start + _SUP_BLOCK]
            yield np.column_stack([np.full(part.shape[0], x0), part])


def real_to_complex(real: np.ndarray) -> np.ndarray:
    return real[:, 0::2] + 1j * real[:, 1::2]


def sup_on_sublevel(s: PeakCombination, step: float = 0.25) -> SupBound:
    """Certified sup of the weighted ``|s|`` over ``{phi <= 1} = B(sqrt 2)``.

    The grid step is ``step`` in ``d_k`` units. On a grid cube of ``d_k``
    half-diagonal ``rho`` around ``c`` every term obeys
    ``exp(-max(0, d - rho)^2 / 4) (|a0| + |a_lin| (d + rho))``, ``d`` its
    distance to ``c``.

    Raises:
        ValueError: If ``step <= 0``.
    """
    if not step > 0:
        raise ValueError(f"step must be > 0, got {step}")
    if len(s) == 0:
        return SupBound(0.0, 0.0, 0.0)
    model = s.model
    h = step * model.eps
    half_diag = 0.5 * h * math.sqrt(2 * s.n)
    rho = half_diag / model.eps
    A = np.abs(s.coeffs[:, 0])
    B = np.linalg.norm(s.coeffs[:, 1:], axis=1)
    measured = 0.0
    bound = 0.0
    for real in ball_grid(s.n, h, SUP_RADIUS + half_diag):
        z = real_to_complex(real)
        inside = np.linalg.norm(z, axis=1) <= SUP_RADIUS
        if np.any(inside):
            measured = max(measured, float(np.max(np.abs(s.weighted(z[inside])))))
        d = model.distance(z[:, None, :], s.centers[None, :, :])
        near = np.maximum(0.0, d - rho)
        cell = np.sum(np.exp(-0.25 * near * near) * (A[None, :] + B[None, :] * (d + rho)), axis=1)
        bound = max(bound, float(np.max(cell)))
    bound = max(bound, measured)
    return SupBound(measured, bound - measured, bound)


@dataclass
class GlobalVerification:
    """Sup over ``{phi <= 1}`` and the certified minimum of ``T`` on the sphere."""

    sup: SupBound
    certificate: TransversalityCertificate

    def as_dict(self) -> Dict[str, Any]:
        return {"sup": self.sup.as_dict(), "certificate": self.certificate.as_dict()}


def verify_global(
    s: PeakCombination,
    *,
    sphere_step: float = 0.25,
    sup_step: float = 0.25,
    target: Optional[float] = None,
    max_depth: int = 0,
    cell_budget: int = 200_000,
) -> GlobalVerification:
    """Certify ``s`` on the whole unit sphere and bound it on ``{phi <= 1}``.

    For ``n = 1`` the xi-part vanishes and the certificate bounds ``|s|``.
    """
    sup = sup_on_sublevel(s, sup_step)
    cert = certified_min(
        s, s.model.sphere, sphere_step,
        target=target, max_depth=max_depth, cell_budget=cell_budget,
    )
    logger.info(
        "Global check: sup=%.6g (measured %.6g), sphere bound=%.6g grid_min=%.6g",
        sup.bound, sup.measured, cert.bound, cert.grid_min,
    )
    return GlobalVerification(sup=sup, certificate=cert)
