"""The F-map of the perturbation engine.

For ``f`` holomorphic near the wall ``{Re z1 = 0}`` and a perturbation
``f_w = f + w0 + sum_{j>=2} w_j z_j``, the value ``w = F(z)`` is the unique
vector for which ``f_w(z) = 0`` and ``df_w(z)`` vanishes on ``span(e2..en)``:

    F0 = -f + sum_{j>=2} z_j df/dz_j,    F_j = -df/dz_j  (j >= 2).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Dict, List, Sequence, Tuple, Union

import numpy as np

from qtransverse.polycore import (
    ExpAffinePoly,
    HoloPoly,
    as_function,
    measure_sup,
    truncate_with_tail_bound,
)

Function = Union[HoloPoly, ExpAffinePoly]


@dataclass(frozen=True)
class FMap:
    """Components ``(F0, F2, ..., Fn)`` of the F-map."""

    components: Tuple[Function, ...]

    @property
    def n(self) -> int:
        return self.components[0].n

    def evaluate(self, z: Any) -> np.ndarray:
        """Stack of component values, shape ``(..., n)``."""
        return np.stack([np.asarray(c.evaluate(z)) for c in self.components], axis=-1)

    def truncate(
        self, degree: int, sup_bounds: Sequence[float], margin: float
    ) -> Tuple["FMap", float]:
        """Taylor-truncate every component.

        Args:
            degree: Truncation degree.
            sup_bounds: Per-component bounds on ``B(1 + margin)``.
            margin: Outer margin.

        Returns:
            The truncated map and a bound for ``|F - F_trunc|`` (vector norm)
            on ``B(1)``.
        """
        polys: List[HoloPoly] = []
        tails: List[float] = []
        for comp, bound in zip(self.components, sup_bounds):
            poly, tail = truncate_with_tail_bound(comp, degree, bound, margin)
            polys.append(poly)
            tails.append(tail)
        return FMap(tuple(polys)), float(np.sqrt(np.sum(np.square(tails))))

    def sup_bounds(self, radius: float, resolution: int = 64) -> List[float]:
        """Certified per-component bounds of ``|F_i|`` on ``B(radius)``."""
        return [measure_sup(c, radius, resolution).bound for c in self.components]

    def to_dict(self) -> Dict[str, Any]:
        return {"components": [c.to_dict() for c in self.components]}


def f_to_F(f: Function) -> FMap:
    """Exact symbolic F-map of ``f`` (for ``n = 1`` this is ``F = (-f)``)."""
    f = as_function(f)
    n = f.n
    F0: Function = -f
    rest: List[Function] = []
    for j in range(2, n + 1):
        d = f.derivative(j)
        F0 = F0 + HoloPoly.variable(n, j) * d
        rest.append(-d)
    return FMap((F0, *rest))
