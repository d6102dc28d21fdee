"""Certified global minima of the transversality functional.

The patch is covered by cells (boxes in real parameter coordinates). For a
cell of radius ``r`` around center ``c`` the functional
``T = |f| + |df restricted to xi|`` is bounded below by

    max(0, |f(c)| - r L0) + max(0, |d_xi f(c)| - r L1)

where ``L0`` bounds ``|grad f|`` and ``L1`` bounds the derivative of the
xi-gradient on the cell ball. Both come from coefficient majorants, capped
by Cauchy estimates when a sup bound on an enlarged ball is known:
``|grad f| <= M / rho`` and ``|d^2 f| <= 2 M / rho^2`` with ``rho`` the
distance from the cell ball to the boundary of ``B(1 + margin)``.

Cells whose lower bound does not exceed a target can be bisected up to a
depth and a cell budget. Violations are only declared at cell centers
that lie inside the patch and whose exact value is at most the target.

On the sphere the function is a section given through the
:class:`SphereSection` protocol, which supplies rescaled-chart data at each
cell center; the combination into a lower bound lives here.
"""

from __future__ import annotations

import functools
import logging
import math
from dataclasses import dataclass, field
from typing import (
    Any,
    Callable,
    Dict,
    Iterable,
    Iterator,
    List,
    NamedTuple,
    Optional,
    Protocol,
    Sequence,
    Tuple,
    Union,
    runtime_checkable,
)

import numpy as np
from scipy.spatial import cKDTree

from qtransverse.core import grids
from qtransverse.levi.models import HypersurfaceModel, Sphere, Wall
from qtransverse.polycore import ExpAffinePoly, HoloPoly, as_function

logger = logging.getLogger(__name__)

Function = Union[HoloPoly, ExpAffinePoly]
Evaluator = Callable[[np.ndarray, np.ndarray], Tuple[np.ndarray, np.ndarray]]

#: Cells evaluated per block during refinement.
_REFINE_BLOCK = 1 << 16

RESOLUTION_INSUFFICIENT = "resolution insufficient"
TARGET_VIOLATED = "target violated"
BUDGET_EXHAUSTED = "cell budget exhausted"


# ---------------------------------------------------------------------------
# Certificate
# ---------------------------------------------------------------------------


@dataclass
class TransversalityCertificate:
    """Grid certificate: ``bound = grid_min - slack`` is a true lower bound.

    Attributes:
        h: Grid step (wall coordinates, or ``d_k`` units on the sphere).
        grid_min: Smallest exact value of ``T`` at in-patch cell centers.
        slack: ``grid_min - bound``.
        bound: Certified lower bound of ``T`` over the patch.
        witness: Cell center realising ``grid_min``.
        cells: Number of cells evaluated (all refinement levels).
        refined: Number of cells that were bisected.
        depth: Deepest refinement level reached.
        target: Level the refinement aimed at, if any.
        diagnostic: ``None`` or a short reason the bound is weak.
    """

    h: float
    grid_min: float
    slack: float
    bound: float
    witness: List[complex]
    cells: int = 0
    refined: int = 0
    depth: int = 0
    target: Optional[float] = None
    diagnostic: Optional[str] = None

    @property
    def certified(self) -> bool:
        """Whether the bound is positive (and above the target, if any)."""
        floor = 0.0 if self.target is None else self.target
        return self.bound > floor

    def as_dict(self) -> Dict[str, Any]:
        return {
            "h": self.h,
            "grid_min": self.grid_min,
            "slack": self.slack,
            "bound": self.bound,
            "witness": [complex(z) for z in self.witness],
            "cells": self.cells,
            "refined": self.refined,
            "depth": self.depth,
            "target": self.target,
            "diagnostic": self.diagnostic,
        }


# ---------------------------------------------------------------------------
# Generic cell scan with branch-and-bound
# ---------------------------------------------------------------------------


@dataclass
class _Scan:
    grid_min: float = math.inf
    witness: Optional[np.ndarray] = None
    bound: float = math.inf
    cells: int = 0
    refined: int = 0
    depth: int = 0
    violation: bool = False
    exhausted: bool = False
    pending: List[Tuple[np.ndarray, np.ndarray, np.ndarray]] = field(default_factory=list)

    def absorb(self, centers: np.ndarray, tvals: np.ndarray, inside: np.ndarray) -> None:
        self.cells += centers.shape[0]
        if not np.any(inside):
            return
        masked = np.where(inside, tvals, np.inf)
        i = int(np.argmin(masked))
        if masked[i] < self.grid_min:
            self.grid_min = float(masked[i])
            self.witness = centers[i].copy()

    def settle(self, lbs: np.ndarray) -> None:
        if lbs.size:
            self.bound = min(self.bound, float(np.min(lbs)))


def scan_cells(
    first_level: Iterable[Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]],
    evaluate: Evaluator,
    inside: Callable[[np.ndarray, np.ndarray], np.ndarray],
    meets_patch: Callable[[np.ndarray, np.ndarray], np.ndarray],
    *,
    target: Optional[float] = None,
    max_depth: int = 0,
    cell_budget: int = 200_000,
    stop_on_violation: bool = False,
) -> _Scan:
    """Run the cell scan.

    Args:
        first_level: Chunks ``(centers, halfwidths, T_at_centers, lower_bounds)``.
        evaluate: Maps ``(centers, halfwidths)`` of refined cells to
            ``(T_at_centers, lower_bounds)``.
        inside: Mask of centers lying in the patch.
        meets_patch: Mask of cells whose ball meets the patch.
        target: Refinement level; cells with lower bound ``<= target`` are
            bisected.
        max_depth: Maximum number of bisection levels.
        cell_budget: Maximum number of evaluated cells.
        stop_on_violation: Return as soon as an in-patch center has
            ``T <= target``.
    """
    scan = _Scan()
    refine = target is not None and max_depth > 0

    def triage(centers: np.ndarray, halves: np.ndarray, tvals: np.ndarray, lbs: np.ndarray) -> None:
        mask_in = inside(centers, halves)
        scan.absorb(centers, tvals, mask_in)
        if target is None:
            scan.settle(lbs)
            return
        weak = lbs <= target
        violated = weak & mask_in & (tvals <= target)
        if np.any(violated):
            scan.violation = True
        split = weak & ~violated if refine else np.zeros_like(weak)
        scan.settle(lbs[~split])
        if np.any(split):
            scan.pending.append((centers[split], halves[split], lbs[split]))

    for centers, halves, tvals, lbs in first_level:
        triage(centers, halves, tvals, lbs)
        if stop_on_violation and scan.violation:
            return scan

    for depth in range(1, max_depth + 1 if refine else 1):
        if not scan.pending:
            break
        current, scan.pending = scan.pending, []
        scan.depth = depth
        for centers, halves, parent_lbs in current:
            children = 1 << centers.shape[1]
            if scan.exhausted or scan.cells + children * centers.shape[0] > cell_budget:
                scan.exhausted = True
                scan.settle(parent_lbs)
                continue
            scan.refined += centers.shape[0]
            kid_c, kid_h = grids.split_cells(centers, halves)
            keep = meets_patch(kid_c, kid_h)
            kid_c, kid_h = kid_c[keep], kid_h[keep]
            for start in range(0, kid_c.shape[0], _REFINE_BLOCK):
                block_c = kid_c[start : start + _REFINE_BLOCK]
                block_h = kid_h[start : start + _REFINE_BLOCK]
                tvals, lbs = evaluate(block_c, block_h)
                triage(block_c, block_h, tvals, lbs)
                if stop_on_violation and scan.violation:
                    return scan
    for _, _, lbs in scan.pending:
        scan.settle(lbs)
    scan.pending = []
    return scan


def finish_scan(scan: _Scan, h: float, to_point: Callable[[np.ndarray], np.ndarray],
            target: Optional[float]) -> TransversalityCertificate:
    grid_min = scan.grid_min if math.isfinite(scan.grid_min) else 0.0
    bound = min(scan.bound, grid_min) if math.isfinite(scan.bound) else grid_min
    witness = [] if scan.witness is None else list(to_point(scan.witness[None, :])[0])
    diagnostic = None
    if scan.violation:
        diagnostic = TARGET_VIOLATED
    elif bound <= 0 < grid_min or (target is not None and bound <= target < grid_min):
        diagnostic = BUDGET_EXHAUSTED if scan.exhausted else RESOLUTION_INSUFFICIENT
    return TransversalityCertificate(
        h=h,
        grid_min=grid_min,
        slack=grid_min - bound,
        bound=bound,
        witness=witness,
        cells=scan.cells,
        refined=scan.refined,
        depth=scan.depth,
        target=target,
        diagnostic=diagnostic,
    )


# ---------------------------------------------------------------------------
# Wall cells
# ---------------------------------------------------------------------------


@dataclass
class WallDerivatives:
    """First and second derivatives of ``f`` needed by wall certification."""

    f: Function
    first: List[Function]
    second: List[List[Function]]

    @classmethod
    def of(cls, f: Function) -> "WallDerivatives":
        f = as_function(f)
        first = [f.derivative(j) for j in range(1, f.n + 1)]
        second = [[first[v - 1].derivative(j) for j in range(1, f.n + 1)] for v in range(2, f.n + 1)]
        return cls(f, first, second)


@dataclass
class WallCells:
    """Per-cell data of ``f`` on a block of wall cells.

    The data supports cheap re-evaluation for ``f_w = f + w0 + sum_{j>=2} w_j z_j``
    through :meth:`lower_bounds`.
    """

    centers: np.ndarray
    halfwidths: np.ndarray
    points: np.ndarray
    radius: np.ndarray
    value: np.ndarray
    grad: np.ndarray
    grad_major: np.ndarray
    hess_major: np.ndarray
    cauchy_room: np.ndarray
    margin: float

    @classmethod
    def build(
        cls,
        derivs: WallDerivatives,
        centers: np.ndarray,
        halfwidths: np.ndarray,
        *,
        margin: float,
    ) -> "WallCells":
        points = grids.wall_to_complex(centers)
        radius = grids.wall_cell_radius(halfwidths)
        n = points.shape[1]
        value = derivs.f.evaluate(points)
        grad = np.stack([d.evaluate(points) for d in derivs.first], axis=1)
        grad_major = np.stack([d.ball_majorant(points, radius) for d in derivs.first], axis=1)
        if derivs.second:
            sq = np.zeros(points.shape[0])
            for row in derivs.second:
                for d in row:
                    sq += d.ball_majorant(points, radius) ** 2
            hess_major = np.sqrt(sq)
        else:
            hess_major = np.zeros(points.shape[0])
        room = 1.0 + margin - (np.linalg.norm(points, axis=1) + radius)
        return cls(centers, halfwidths, points, radius, value, grad.reshape(-1, n),
                   grad_major.reshape(-1, n), hess_major, room, margin)

    def lower_bounds(
        self, w: Optional[np.ndarray] = None, sup_bound: Optional[float] = None
    ) -> Tuple[np.ndarray, np.ndarray]:
        """Exact ``T`` at centers and certified lower bounds on cells, for ``f_w``."""
        n = self.points.shape[1]
        value = self.value
        grad = self.grad
        grad_major = self.grad_major
        if w is not None:
            w = np.asarray(w, dtype=complex)
            shift = np.zeros(n, dtype=complex)
            shift[1:] = w[1:]
            value = value + w[0] + self.points @ shift
            grad = grad + shift[None, :]
            grad_major = grad_major + np.abs(shift)[None, :]
        xi = np.linalg.norm(grad[:, 1:], axis=1) if n > 1 else np.zeros(value.shape[0])
        modulus = np.abs(value)
        L0 = np.linalg.norm(grad_major, axis=1)
        L1 = self.hess_major.copy()
        if sup_bound is not None:
            M = float(sup_bound)
            if w is not None:
                # |f_w| <= M + |w0| + sum |w_j| |z_j| on B(1 + margin)
                M += abs(w[0]) + (1.0 + self.margin) * float(np.sum(np.abs(w[1:])))
            room = self.cauchy_room
            ok = room > 0
            safe = np.where(ok, room, 1.0)
            L0 = np.where(ok, np.minimum(L0, M / safe), L0)
            L1 = np.where(ok, np.minimum(L1, math.sqrt(max(n - 1, 0)) * 2.0 * M / safe**2), L1)
        tvals = modulus + xi
        lbs = np.maximum(0.0, modulus - self.radius * L0) + np.maximum(0.0, xi - self.radius * L1)
        return tvals, lbs


def wall_masks(model: Wall) -> Tuple[Callable[..., np.ndarray], Callable[..., np.ndarray]]:
    """``inside`` and ``meets_patch`` predicates for a wall patch."""

    def inside(centers: np.ndarray, halves: np.ndarray) -> np.ndarray:
        return np.linalg.norm(centers, axis=1) <= model.radius

    def meets(centers: np.ndarray, halves: np.ndarray) -> np.ndarray:
        return np.linalg.norm(centers, axis=1) - grids.wall_cell_radius(halves) <= model.radius

    return inside, meets


def wall_evaluator(
    derivs: WallDerivatives, *, margin: float, sup_bound: Optional[float]
) -> Evaluator:
    def evaluate(centers: np.ndarray, halves: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        cells = WallCells.build(derivs, centers, halves, margin=margin)
        return cells.lower_bounds(None, sup_bound)

    return evaluate


def _certify_wall(
    f: Function,
    model: Wall,
    h: float,
    sup_bound: Optional[float],
    margin: float,
    target: Optional[float],
    max_depth: int,
    cell_budget: int,
) -> TransversalityCertificate:
    f = as_function(f)
    if f.n != model.n:
        raise ValueError(f"Dimension mismatch: f has n={f.n}, model has n={model.n}")
    derivs = WallDerivatives.of(f)
    evaluate = wall_evaluator(derivs, margin=margin, sup_bound=sup_bound)
    inside, meets = wall_masks(model)

    def first_level() -> Iterator[Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]]:
        for centers, halves in grids.iter_wall_cells(model.n, model.radius, h):
            tvals, lbs = evaluate(centers, halves)
            yield centers, halves, tvals, lbs

    scan = scan_cells(
        first_level(), evaluate, inside, meets,
        target=target, max_depth=max_depth, cell_budget=cell_budget,
    )
    return finish_scan(scan, h, grids.wall_to_complex, target)


# ---------------------------------------------------------------------------
# Sphere cells
# ---------------------------------------------------------------------------


class SphereCellBounds(NamedTuple):
    """Rescaled-chart data of a section at cell centers.

    With ``Q`` the quotient of the section by the peak section at the cell
    center, in chart coordinates of unit ``d_k``:

    * ``value``: lower bound for ``|Q(0)|``;
    * ``xi``: lower bound for the norm of ``dQ(0)`` on the chart axes ``2..n``;
    * ``sup``: bound for ``|Q|`` on the chart ball of the cell radius;
    * ``lipschitz``: bound for ``|grad Q|`` on that ball;
    * ``xi_lipschitz``: bound for the derivative of the xi-gradient there.
    """

    value: np.ndarray
    xi: np.ndarray
    sup: np.ndarray
    lipschitz: np.ndarray
    xi_lipschitz: np.ndarray


@runtime_checkable
class SphereSection(Protocol):
    """A holomorphic section of the flat model certified on the sphere."""

    n: int
    k: float

    def transversality(self, points: np.ndarray) -> np.ndarray:
        """Exact weighted ``|s| + |ds restricted to xi|`` at unit-sphere points."""

    def chart_bounds(self, points: np.ndarray, radius: np.ndarray) -> SphereCellBounds:
        """Chart data at cell centers ``points`` with ``d_k`` radii ``radius``."""


def sphere_cell_lower_bound(bounds: SphereCellBounds, radius: np.ndarray, k: float) -> np.ndarray:
    """Lower bound of the weighted ``T`` on sphere cells of ``d_k`` radius ``radius``.

    On the cell the weight ``exp(-|zeta|^2 / 4)`` is at least
    ``exp(-r^2 / 4)``; the xi-planes of nearby sphere points tilt against the
    chart axes by at most ``s = eps r / (1 - eps r)`` with
    ``eps = (2k)^{-1/2}``, which costs ``s |grad Q| + (r / 2) |Q| / (1 - eps r)``.
    """
    eps = 1.0 / math.sqrt(2.0 * k)
    r = np.asarray(radius, dtype=float)
    tilt_ok = eps * r < 1.0
    denom = np.where(tilt_ok, 1.0 - eps * r, 1.0)
    s = eps * r / denom
    weight = np.exp(-0.25 * r * r)
    base = np.maximum(0.0, bounds.value - r * bounds.lipschitz)
    tilt = r * bounds.xi_lipschitz + s * bounds.lipschitz + 0.5 * r * bounds.sup / denom
    xi = np.maximum(0.0, bounds.xi - tilt)
    return np.where(tilt_ok, weight * (base + xi), 0.0)


@functools.lru_cache(maxsize=8)
def _sphere_grid(n: int, spacing: float) -> Tuple[np.ndarray, np.ndarray]:
    centers, halves = grids.sphere_cells(n, spacing)
    centers.setflags(write=False)
    halves.setflags(write=False)
    return centers, halves


def _certify_sphere(
    section: SphereSection,
    model: Sphere,
    h: float,
    target: Optional[float],
    max_depth: int,
    cell_budget: int,
    center: Optional[np.ndarray],
    patch_radius: Optional[float],
) -> TransversalityCertificate:
    if section.n != model.n:
        raise ValueError(f"Dimension mismatch: section has n={section.n}, model has n={model.n}")
    scale = model.scale

    def radius_of(params: np.ndarray, halves: np.ndarray) -> np.ndarray:
        return scale * grids.sphere_cell_radius(params, halves)

    if center is None:
        def inside(params: np.ndarray, halves: np.ndarray) -> np.ndarray:
            return np.ones(params.shape[0], dtype=bool)

        meets = inside
    else:
        tree = cKDTree(grids.to_real(np.atleast_2d(center)) * scale)
        rad = float(patch_radius if patch_radius is not None else 1.0)

        def nearest(params: np.ndarray) -> np.ndarray:
            d, _ = tree.query(grids.to_real(grids.sphere_to_complex(params)) * scale, k=1)
            return d

        def inside(params: np.ndarray, halves: np.ndarray) -> np.ndarray:
            return nearest(params) <= rad

        def meets(params: np.ndarray, halves: np.ndarray) -> np.ndarray:
            return nearest(params) - radius_of(params, halves) <= rad

    def evaluate(params: np.ndarray, halves: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        points = grids.sphere_to_complex(params)
        radius = radius_of(params, halves)
        tvals = np.asarray(section.transversality(points), dtype=float)
        lbs = sphere_cell_lower_bound(section.chart_bounds(points, radius), radius, model.k)
        return tvals, lbs

    params, halves = _sphere_grid(model.n, h / scale)
    keep = meets(params, halves)
    params, halves = params[keep], halves[keep]

    def first_level() -> Iterator[Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]]:
        for start in range(0, params.shape[0], _REFINE_BLOCK):
            c = np.array(params[start : start + _REFINE_BLOCK])
            hw = np.array(halves[start : start + _REFINE_BLOCK])
            tvals, lbs = evaluate(c, hw)
            yield c, hw, tvals, lbs

    scan = scan_cells(
        first_level(), evaluate, inside, meets,
        target=target, max_depth=max_depth, cell_budget=cell_budget,
    )
    return finish_scan(scan, h, grids.sphere_to_complex, target)


# ---------------------------------------------------------------------------
# Public entry point
# ---------------------------------------------------------------------------


def certified_min(
    f: Union[Function, SphereSection],
    model: HypersurfaceModel,
    h: float,
    sup_bound: Optional[float] = None,
    *,
    margin: float = 0.25,
    target: Optional[float] = None,
    max_depth: int = 0,
    cell_budget: int = 200_000,
    center: Optional[Sequence[complex]] = None,
    patch_radius: Optional[float] = None,
) -> TransversalityCertificate:
    """Certified lower bound of ``T(f, .)`` over a hypersurface patch.

    Args:
        f: Polynomial or exponential sum (wall) or a :class:`SphereSection`.
        model: :class:`Wall` or :class:`Sphere`.
        h: Grid step (wall coordinates; ``d_k`` units on the sphere).
        sup_bound: Bound for ``|f|`` on ``B(1 + margin)``; enables the Cauchy
            caps on wall cells.
        margin: Outer margin of the sup bound.
        target: Refinement level for branch-and-bound.
        max_depth: Bisection depth (0 disables refinement).
        cell_budget: Maximum number of cells evaluated.
        center: Sphere only: restrict to the ``d_k`` ball around this point,
            or to the union of balls around the rows of an ``(m, n)`` array.
        patch_radius: Sphere only: radius of those balls (default 1).

    Raises:
        ValueError: If ``h <= 0`` or the inputs do not match the model.
    """
    if h <= 0:
        raise ValueError(f"h must be > 0, got {h}")
    if margin <= 0:
        raise ValueError(f"margin must be > 0, got {margin}")
    if isinstance(model, Wall):
        cert = _certify_wall(f, model, h, sup_bound, margin, target, max_depth, cell_budget)  # type: ignore[arg-type]
    elif isinstance(model, Sphere):
        if not isinstance(f, SphereSection):
            raise TypeError("Sphere certification needs a SphereSection (e.g. a PeakCombination)")
        c = None if center is None else np.asarray(center, dtype=complex)
        cert = _certify_sphere(f, model, h, target, max_depth, cell_budget, c, patch_radius)
    else:
        raise TypeError(f"Unsupported model type: {type(model).__name__}")
    logger.debug(
        "certified_min model=%s h=%g grid_min=%.6g bound=%.6g cells=%d refined=%d",
        model.name, h, cert.grid_min, cert.bound, cert.cells, cert.refined,
    )
    return cert
