"""Hypersurface models: the flat wall and the unit sphere of the flat model."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Dict, Union

import numpy as np

from qtransverse.core.constants import ON_SURFACE_TOL


@dataclass(frozen=True)
class Wall:
    """The patch ``{z in B(radius): Re z1 = 0}`` of ``C^n``."""

    n: int
    radius: float = 1.0

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.radius <= 0:
            raise ValueError(f"radius must be > 0, got {self.radius}")

    @property
    def name(self) -> str:
        return "wall"

    @property
    def scale(self) -> float:
        """Wall coordinates are already in ``d_k`` units."""
        return 1.0

    def distance(self, z: Any, w: Any) -> np.ndarray:
        diff = np.asarray(z, dtype=complex) - np.asarray(w, dtype=complex)
        return np.linalg.norm(diff, axis=-1)

    def contains(self, point: Any, tol: float = ON_SURFACE_TOL) -> bool:
        z = np.asarray(point, dtype=complex).reshape(-1)
        return (
            z.shape[0] == self.n
            and abs(z[0].real) <= tol
            and float(np.linalg.norm(z)) <= self.radius + tol
        )

    def as_dict(self) -> Dict[str, Any]:
        return {"model": "wall", "n": self.n, "radius": self.radius}


@dataclass(frozen=True)
class Sphere:
    """Unit sphere of ``C^n`` with the rescaled distance ``d_k = sqrt(2k) |z - w|``."""

    n: int
    k: float

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.k <= 0:
            raise ValueError(f"k must be > 0, got {self.k}")

    @property
    def name(self) -> str:
        return "sphere"

    @property
    def scale(self) -> float:
        """Factor converting Euclidean distances into ``d_k``."""
        return math.sqrt(2.0 * self.k)

    @property
    def chart_step(self) -> float:
        """Euclidean length of one ``d_k`` unit, ``(2k)^{-1/2}``."""
        return 1.0 / self.scale

    def contains(self, point: Any, tol: float = ON_SURFACE_TOL) -> bool:
        z = np.asarray(point, dtype=complex).reshape(-1)
        return z.shape[0] == self.n and abs(float(np.linalg.norm(z)) - 1.0) <= tol

    def distance(self, z: Any, w: Any) -> np.ndarray:
        """Chordal ``d_k`` distance between points (broadcasting)."""
        diff = np.asarray(z, dtype=complex) - np.asarray(w, dtype=complex)
        return self.scale * np.linalg.norm(diff, axis=-1)

    def as_dict(self) -> Dict[str, Any]:
        return {"model": "sphere", "n": self.n, "k": self.k}


HypersurfaceModel = Union[Wall, Sphere]


def check_on_surface(model: HypersurfaceModel, point: Any) -> np.ndarray:
    """Return ``point`` as a complex vector, or raise if it is off the model.

    Raises:
        ValueError: If the point is not on the hypersurface to 1e-9.
    """
    z = np.asarray(point, dtype=complex).reshape(-1)
    if z.shape[0] != model.n:
        raise ValueError(f"Point dimension mismatch: expected n={model.n}, got {z.shape[0]}")
    if not model.contains(z):
        raise ValueError(f"Point {z.tolist()} is not on the {model.name} hypersurface")
    return z
