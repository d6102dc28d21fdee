"""Greedy separated nets and greedy separated colorings.

Both selections are first-fit in index order: a point is taken when no
point already taken (in the current round) lies at ``d_k`` distance below
the separation. The result is separated by construction and maximal with
respect to the candidates of the round.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Optional, Sequence

import numpy as np
from scipy.spatial import cKDTree

from .cloud import MetricCloud, geodesic_slack

logger = logging.getLogger(__name__)


def _first_fit(
    coords: np.ndarray, tree: cKDTree, candidates: Iterable[int], separation: float, blocked: np.ndarray
) -> List[int]:
    """Select candidates in order, blocking everything closer than ``separation``."""
    chosen: List[int] = []
    for i in candidates:
        if blocked[i]:
            continue
        chosen.append(int(i))
        near = np.asarray(tree.query_ball_point(coords[i], r=separation), dtype=np.int64)
        if near.size:
            dist = np.linalg.norm(coords[near] - coords[i], axis=1)
            blocked[near[dist < separation]] = True
    return chosen


@dataclass(frozen=True)
class Net:
    """Selected cloud indices, pairwise at least ``separation`` apart."""

    cloud: MetricCloud
    indices: np.ndarray
    separation: float

    def __len__(self) -> int:
        return int(self.indices.size)

    @property
    def points(self) -> np.ndarray:
        return self.cloud.points[self.indices]

    @property
    def embedded(self) -> np.ndarray:
        return self.cloud.embedded[self.indices]

    def tree(self) -> cKDTree:
        return cKDTree(self.embedded)

    def as_dict(self) -> Dict[str, Any]:
        return {
            "N": len(self),
            "separation": self.separation,
            "cloud": self.cloud.as_dict(),
            "geodesic_slack": geodesic_slack(self.cloud.model, self.separation),
        }


def greedy_net(cloud: MetricCloud, separation: float = 1.0) -> Net:
    """Maximal ``separation``-separated subset of ``cloud``, first fit.

    Raises:
        ValueError: On an empty cloud or a non-positive separation.
    """
    if len(cloud) == 0:
        raise ValueError("Cannot build a net from an empty cloud")
    if not separation > 0:
        raise ValueError(f"separation must be positive, got {separation}")
    blocked = np.zeros(len(cloud), dtype=bool)
    chosen = _first_fit(cloud.embedded, cloud.tree, range(len(cloud)), separation, blocked)
    logger.info("Greedy net: %d of %d points at separation %g", len(chosen), len(cloud), separation)
    return Net(cloud=cloud, indices=np.asarray(chosen, dtype=np.int64), separation=float(separation))


@dataclass(frozen=True)
class Coloring:
    """Colors ``1..M`` on the points of a net; same-color pairs are ``>= D`` apart."""

    net: Net
    colors: np.ndarray
    D: float

    @property
    def M(self) -> int:
        return int(self.colors.max()) if self.colors.size else 0

    def classes(self) -> List[np.ndarray]:
        """Net positions of each color, in color order."""
        return [np.flatnonzero(self.colors == c) for c in range(1, self.M + 1)]

    def as_dict(self) -> Dict[str, Any]:
        return {"M": self.M, "D": self.D, "N": len(self.net)}


def greedy_coloring(net: Net, D: float) -> Coloring:
    """Color the net by repeated first-fit ``D``-separated rounds.

    Raises:
        ValueError: If ``D < 1``.
    """
    if D < 1:
        raise ValueError(f"D must be >= 1, got {D}")
    coords = net.embedded
    tree = cKDTree(coords)
    colors = np.zeros(len(net), dtype=np.int64)
    color = 0
    while not colors.all():
        color += 1
        blocked = colors > 0
        chosen = _first_fit(coords, tree, np.flatnonzero(~blocked), D, blocked)
        colors[chosen] = color
    logger.info("Greedy coloring: M=%d colors at D=%g over %d net points", color, D, len(net))
    return Coloring(net=net, colors=colors, D=float(D))


def covering_radius(net: Net, cloud: Optional[MetricCloud] = None) -> float:
    """Largest ``d_k`` distance from a cloud point to its nearest net point."""
    cloud = net.cloud if cloud is None else cloud
    if len(net) == 0:
        return float("inf")
    dist, _ = net.tree().query(cloud.embedded, k=1)
    return float(np.max(dist)) if dist.size else 0.0


def _min_pairwise(coords: np.ndarray) -> float:
    if coords.shape[0] < 2:
        return float("inf")
    dist, _ = cKDTree(coords).query(coords, k=2)
    return float(np.min(dist[:, 1]))


@dataclass(frozen=True)
class NetCheck:
    separated: bool
    maximal: bool
    min_separation: float
    covering_radius: float

    @property
    def ok(self) -> bool:
        return self.separated and self.maximal

    def as_dict(self) -> Dict[str, Any]:
        return {
            "separated": self.separated,
            "maximal": self.maximal,
            "min_separation": self.min_separation,
            "covering_radius": self.covering_radius,
        }


def verify_net(net: Net) -> NetCheck:
    """Re-scan separation and maximality of a net."""
    min_sep = _min_pairwise(net.embedded)
    cover = covering_radius(net)
    return NetCheck(
        separated=min_sep >= net.separation,
        maximal=cover < net.separation or np.isclose(cover, net.separation),
        min_separation=min_sep,
        covering_radius=cover,
    )


@dataclass(frozen=True)
class ColoringCheck:
    complete: bool
    separated: bool
    min_same_color: float

    @property
    def ok(self) -> bool:
        return self.complete and self.separated

    def as_dict(self) -> Dict[str, Any]:
        return {
            "complete": self.complete,
            "separated": self.separated,
            "min_same_color": self.min_same_color,
        }


def verify_coloring(coloring: Coloring) -> ColoringCheck:
    """Re-scan every color class for ``D``-separation."""
    coords = coloring.net.embedded
    worst = min((_min_pairwise(coords[cls]) for cls in coloring.classes()), default=float("inf"))
    return ColoringCheck(
        complete=bool(np.all(coloring.colors >= 1)),
        separated=worst >= coloring.D,
        min_same_color=worst,
    )


def calibrate_colors(net: Net, Ds: Sequence[float]) -> Dict[float, int]:
    """Measured color count ``M(D)`` for each separation in ``Ds``."""
    return {float(D): greedy_coloring(net, D).M for D in Ds}


def points_as_rows(net: Net) -> List[Dict[str, Any]]:
    """CSV rows ``(index, re/im coordinates)`` of the net points."""
    rows = []
    for idx, z in zip(net.indices, net.points):
        row: Dict[str, Any] = {"index": int(idx)}
        for j, value in enumerate(z, start=1):
            row[f"re_z{j}"] = float(value.real)
            row[f"im_z{j}"] = float(value.imag)
        rows.append(row)
    return rows


def colors_as_rows(coloring: Coloring) -> List[Dict[str, Any]]:
    """:func:`points_as_rows` plus the color of each point."""
    rows = points_as_rows(coloring.net)
    for row, color in zip(rows, coloring.colors):
        row["color"] = int(color)
    return rows
