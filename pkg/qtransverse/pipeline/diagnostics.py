"""Log-derivative diagnostic of a peak combination.

Where the weighted modulus of ``s`` is not small, ``d log s`` should stay
within ``O(sqrt k)`` of ``k d'phi``; in the flat model
``d'phi = sum_i conj(z_i) dz_i``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Mapping

import numpy as np

from .flat import PeakCombination
from .verify import ball_grid, real_to_complex

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LogDerivativeDiagnostic:
    """Sup of ``|d log s - k d'phi|`` over probes of ``{phi <= 0}`` above the floor."""

    k: float
    floor: float
    probe_step: float
    probes: int
    kept: int
    raw_sup: float
    normalized_sup: float

    @property
    def empty(self) -> bool:
        return self.kept == 0

    def as_dict(self) -> Dict[str, Any]:
        return {
            "k": self.k,
            "floor": self.floor,
            "probe_step": self.probe_step,
            "probes": self.probes,
            "kept": self.kept,
            "empty": self.empty,
            "raw_sup": self.raw_sup,
            "normalized_sup": self.normalized_sup,
        }


def log_derivative_diagnostic(
    s: PeakCombination, floor: float, probe_step: float = 0.05
) -> LogDerivativeDiagnostic:
    """Probe the unit ball on a grid of ``d_k`` step ``probe_step``.

    An empty probe region (weighted ``|s|`` never above ``floor``) is
    reported with ``kept = 0`` and zero sups.

    Raises:
        ValueError: If ``floor <= 0`` or ``probe_step <= 0``.
    """
    if not floor > 0:
        raise ValueError(f"floor must be > 0, got {floor}")
    if not probe_step > 0:
        raise ValueError(f"probe_step must be > 0, got {probe_step}")
    k = s.k
    probes = kept = 0
    raw = 0.0
    for real in ball_grid(s.n, probe_step * s.model.eps, 1.0):
        z = real_to_complex(real)
        probes += z.shape[0]
        W, G = s.weighted_gradient(z)
        mask = np.abs(W) > floor
        if not np.any(mask):
            continue
        kept += int(np.count_nonzero(mask))
        dlog = G[mask] / W[mask, None] - k * np.conj(z[mask])
        raw = max(raw, float(np.max(np.linalg.norm(dlog, axis=1))))
    if kept == 0:
        logger.warning("Log-derivative probe region is empty at floor %.3g (k=%g)", floor, k)
    return LogDerivativeDiagnostic(
        k=k,
        floor=floor,
        probe_step=probe_step,
        probes=probes,
        kept=kept,
        raw_sup=raw,
        normalized_sup=raw / math.sqrt(k),
    )


def log_derivative_trend(
    sections: Mapping[float, PeakCombination], floor: float, probe_step: float = 0.05
) -> List[Dict[str, Any]]:
    """Diagnostic per ``k`` with the ratio of consecutive normalized sups."""
    rows: List[Dict[str, Any]] = []
    previous = None
    for k in sorted(sections):
        diag = log_derivative_diagnostic(sections[k], floor, probe_step)
        ratio = None
        if previous is not None and previous > 0:
            ratio = diag.normalized_sup / previous
        rows.append({**diag.as_dict(), "ratio": ratio})
        previous = diag.normalized_sup
    return rows
