"""Dense point clouds on hypersurface models, measured in ``d_k``."""

from __future__ import annotations

import functools
import logging
import math
from dataclasses import dataclass
from typing import Any, Dict

import numpy as np
from scipy.spatial import cKDTree

from qtransverse.core import grids
from qtransverse.core.constants import ON_SURFACE_TOL
from qtransverse.levi.models import HypersurfaceModel, Sphere, Wall

logger = logging.getLogger(__name__)


def _off_surface(model: HypersurfaceModel, points: np.ndarray) -> np.ndarray:
    if isinstance(model, Sphere):
        return np.abs(np.linalg.norm(points, axis=1) - 1.0) > ON_SURFACE_TOL
    return np.abs(points[:, 0].real) > ON_SURFACE_TOL


@dataclass(frozen=True)
class MetricCloud:
    """Points of a model with the ambient chordal ``d_k`` metric.

    Raises:
        ValueError: If ``points`` is not ``(N, n)`` or a point is off the
            model by more than 1e-9.
    """

    model: HypersurfaceModel
    points: np.ndarray

    def __post_init__(self) -> None:
        pts = np.asarray(self.points, dtype=complex)
        if pts.ndim != 2 or pts.shape[1] != self.model.n:
            raise ValueError(f"Expected points of shape (N, {self.model.n}), got {pts.shape}")
        bad = np.flatnonzero(_off_surface(self.model, pts))
        if bad.size:
            raise ValueError(f"Point {int(bad[0])} is not on the {self.model.name} hypersurface")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return int(self.points.shape[0])

    @property
    def scale(self) -> float:
        return float(self.model.scale)

    @functools.cached_property
    def embedded(self) -> np.ndarray:
        """Real coordinates scaled so Euclidean distance equals ``d_k``."""
        return grids.to_real(self.points) * self.scale

    @functools.cached_property
    def tree(self) -> cKDTree:
        return cKDTree(self.embedded)

    def distance(self, i: int, j: int) -> float:
        return float(np.linalg.norm(self.embedded[i] - self.embedded[j]))

    def as_dict(self) -> Dict[str, Any]:
        return {"model": self.model.as_dict(), "size": len(self)}


def geodesic_slack(model: HypersurfaceModel, separation: float) -> float:
    """Excess of the great-circle ``d_k`` over a chordal ``d_k`` of ``separation``."""
    if not isinstance(model, Sphere):
        return 0.0
    R = model.scale
    ratio = min(1.0, separation / (2.0 * R))
    return 2.0 * R * math.asin(ratio) - separation


def _wall_cloud(model: Wall, spacing: float, rng: np.random.Generator) -> np.ndarray:
    m = 2 * model.n - 1
    offset = rng.uniform(-0.5, 0.5, size=m) * spacing
    count = grids.wall_axis_count(model.radius, spacing) + 1
    axis = (np.arange(count) - 0.5 * (count - 1)) * spacing
    mesh = np.stack(np.meshgrid(*([axis] * m), indexing="ij"), axis=-1).reshape(-1, m) + offset
    mesh = mesh[np.linalg.norm(mesh, axis=1) <= model.radius]
    return grids.wall_to_complex(mesh)


def sample_boundary(model: HypersurfaceModel, density: float = 4.0, seed: int = 0) -> MetricCloud:
    """Deterministic cloud with ``d_k`` spacing ``1 / density``.

    Spheres use the circle (``n = 1``) or Hopf (``n = 2``) cell centers with
    a seeded angular offset, so an ``n = 1`` cloud has exactly
    ``ceil(density * 2 pi sqrt(2k))`` points. Wall patches use a seeded
    shift of the cubic grid in wall coordinates.

    Raises:
        ValueError: If ``density <= 0`` or a sphere has ``n > 2``.
    """
    if not density > 0:
        raise ValueError(f"density must be positive, got {density}")
    rng = np.random.default_rng(seed)
    spacing = 1.0 / density
    if isinstance(model, Sphere):
        if model.n > 2:
            raise ValueError(f"Sphere clouds are available for n in {{1, 2}}, got n={model.n}")
        angular = spacing / model.scale
        offsets = rng.uniform(0.0, angular, size=2)
        params, _ = grids.sphere_cells(model.n, angular, offsets)
        points = grids.sphere_to_complex(params)
    else:
        points = _wall_cloud(model, spacing, rng)
    logger.info("Sampled %d points on the %s (density %g)", len(points), model.name, density)
    return MetricCloud(model=model, points=points)
