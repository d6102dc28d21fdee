"""Separated nets and greedy colorings on hypersurface models."""

from .cloud import MetricCloud, geodesic_slack, sample_boundary
from .greedy import (
    Coloring,
    ColoringCheck,
    Net,
    NetCheck,
    calibrate_colors,
    colors_as_rows,
    covering_radius,
    greedy_coloring,
    greedy_net,
    points_as_rows,
    verify_coloring,
    verify_net,
)

__all__ = [
    "MetricCloud",
    "geodesic_slack",
    "sample_boundary",
    "Coloring",
    "ColoringCheck",
    "Net",
    "NetCheck",
    "calibrate_colors",
    "colors_as_rows",
    "covering_radius",
    "greedy_coloring",
    "greedy_net",
    "points_as_rows",
    "verify_coloring",
    "verify_net",
]
