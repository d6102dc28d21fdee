"""Hypersurface models, Levi frames and certified transversality minima."""

from .certify import (
    SphereCellBounds,
    SphereSection,
    TransversalityCertificate,
    WallCells,
    WallDerivatives,
    certified_min,
    finish_scan,
    scan_cells,
    sphere_cell_lower_bound,
    wall_evaluator,
    wall_masks,
)
from .frames import LeviFrame, levi_frame, transversality_at, wall_transversality
from .models import HypersurfaceModel, Sphere, Wall, check_on_surface

__all__ = [
    "SphereCellBounds",
    "SphereSection",
    "TransversalityCertificate",
    "WallCells",
    "WallDerivatives",
    "certified_min",
    "finish_scan",
    "scan_cells",
    "sphere_cell_lower_bound",
    "wall_evaluator",
    "wall_masks",
    "LeviFrame",
    "levi_frame",
    "transversality_at",
    "wall_transversality",
    "HypersurfaceModel",
    "Sphere",
    "Wall",
    "check_on_surface",
]
