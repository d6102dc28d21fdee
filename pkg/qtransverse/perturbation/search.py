"""Randomised search for a transversality-restoring perturbation.

Given ``f`` with ``|f| <= 1`` on ``B(1 + eps)`` and ``0 < eta < 1/3``, the
engine looks for ``w = (w0, w2, ..., wn)`` with ``|w| <= eta |ln eta|^p``
such that ``f_w = f + w0 + sum_{j>=2} w_j z_j`` satisfies
``|f_w| + |df_w restricted to xi| > eta`` on the wall patch
``{z in B(1): Re z1 = 0}``.

Candidates are drawn uniformly in balls of radius
``delta_t = min(eta (1 + t / 10), allowed_radius)`` with a counter-based
seed ``(seed, t)``; the first candidate whose direct wall certificate
exceeds ``eta`` (and that passes the optional external verifier) is
accepted. The truncated F-map is built and kept as a cross-check.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterator, List, Optional, Tuple, Union

import numpy as np

from qtransverse.core import grids
from qtransverse.core.constants import ON_SURFACE_TOL
from qtransverse.core.errors import PerturbationBudgetExhausted
from qtransverse.levi import (
    TransversalityCertificate,
    Wall,
    WallCells,
    WallDerivatives,
    finish_scan,
    scan_cells,
    wall_evaluator,
    wall_masks,
)
from qtransverse.perturbation.fmap import FMap, f_to_F
from qtransverse.polycore import ExpAffinePoly, HoloPoly, as_function, measure_sup

logger = logging.getLogger(__name__)

Function = Union[HoloPoly, ExpAffinePoly]
#: External acceptance test: ``w -> (accepted, certified bound)``.
Verifier = Callable[[np.ndarray], Tuple[bool, float]]

_SUP_SLACK = 1e-9


@dataclass
class PerturbationProblem:
    """Inputs of :func:`find_perturbation`.

    Attributes:
        f: Function on ``C^n`` with ``|f| <= 1`` on ``B(1 + margin)``.
        eta: Target transversality, in ``(0, 1/3)``.
        p_exponent: Exponent ``p >= 1`` of the allowed radius.
        margin: Outer margin ``eps``.
        budget: Maximum number of candidates.
        seed: Seed of the counter-based candidate stream.
        taylor_constant: ``C`` in the truncation degree ``ceil(C |ln eta|)``.
        max_degree: Cap on the truncation degree.
        taylor_check: Build the truncated F-map cross-check.
        grid_step: Wall grid step of the acceptance test.
        max_depth: Refinement depth of the acceptance test.
        cell_budget: Cell budget per candidate.
        max_radius: Optional extra cap on ``|w|``.
        sup_bound: Trusted bound for ``|f|`` on ``B(1 + margin)``; measured
            when ``None``.
    """

    f: Function
    eta: float
    p_exponent: float = 3.0
    margin: float = 0.25
    budget: int = 100_000
    seed: int = 0
    taylor_constant: float = 8.0
    max_degree: int = 200
    taylor_check: bool = True
    grid_step: float = 0.125
    max_depth: int = 6
    cell_budget: int = 200_000
    max_radius: Optional[float] = None
    sup_bound: Optional[float] = None

    def __post_init__(self) -> None:
        self.f = as_function(self.f)
        if not 0.0 < self.eta < 1.0 / 3.0:
            raise ValueError(f"eta must lie in (0, 1/3), got {self.eta}")
        if self.p_exponent < 1.0:
            raise ValueError(f"p_exponent must be >= 1, got {self.p_exponent}")
        if self.margin <= 0:
            raise ValueError(f"margin must be > 0, got {self.margin}")
        if self.budget < 1:
            raise ValueError(f"budget must be >= 1, got {self.budget}")
        if self.grid_step <= 0:
            raise ValueError(f"grid_step must be > 0, got {self.grid_step}")
        if self.max_radius is not None and self.max_radius <= 0:
            raise ValueError(f"max_radius must be > 0, got {self.max_radius}")

    @property
    def allowed_radius(self) -> float:
        """``eta |ln eta|^p``, capped by ``max_radius`` when given."""
        radius = self.eta * abs(math.log(self.eta)) ** self.p_exponent
        return radius if self.max_radius is None else min(radius, self.max_radius)

    def constants(self) -> Dict[str, Any]:
        return {
            "eta": self.eta,
            "p_exponent": self.p_exponent,
            "margin": self.margin,
            "taylor_constant": self.taylor_constant,
            "grid_step": self.grid_step,
            "max_depth": self.max_depth,
            "budget": self.budget,
            "max_radius": self.max_radius,
        }


@dataclass
class Rejection:
    draw: int
    norm_w: float
    reason: str
    bound: float

    def as_dict(self) -> Dict[str, Any]:
        return {"draw": self.draw, "norm_w": self.norm_w, "reason": self.reason, "bound": self.bound}


@dataclass
class PerturbationCertificate:
    """Accepted perturbation and its certificates.

    Attributes:
        w: ``(w0, w2, ..., wn)``.
        norm_w: ``|w|``.
        allowed_radius: ``eta |ln eta|^p`` (or the tighter cap).
        certificate: Wall certificate of ``f_w``; ``bound > eta``.
        candidates_tried: Number of drawn candidates including the accepted one.
        degree: Truncation degree of the F-map cross-check.
        taylor_tail: Certified truncation error of that cross-check.
        tail_met: Whether ``taylor_tail <= eta``.
        f_distance_min: Smallest ``|w - F_trunc(c)|`` over in-patch grid centers.
        sandwich_ok: Whether ``|w - F(c)| / (2 sqrt 2) <= T <= sqrt 5 |w - F(c)|``
            held at every in-patch grid center.
        verifier_bound: Bound reported by the external verifier, if any.
        constants: Engineering constants used.
        rejections: All rejected candidates.
    """

    w: np.ndarray
    norm_w: float
    allowed_radius: float
    certificate: TransversalityCertificate
    candidates_tried: int
    degree: Optional[int] = None
    taylor_tail: Optional[float] = None
    tail_met: Optional[bool] = None
    f_distance_min: Optional[float] = None
    sandwich_ok: Optional[bool] = None
    verifier_bound: Optional[float] = None
    constants: Dict[str, Any] = field(default_factory=dict)
    rejections: List[Rejection] = field(default_factory=list)

    def as_dict(self) -> Dict[str, Any]:
        return {
            "w": [complex(x) for x in self.w],
            "norm_w": self.norm_w,
            "allowed_radius": self.allowed_radius,
            "certificate": self.certificate.as_dict(),
            "candidates_tried": self.candidates_tried,
            "degree": self.degree,
            "taylor_tail": self.taylor_tail,
            "tail_met": self.tail_met,
            "f_distance_min": self.f_distance_min,
            "sandwich_ok": self.sandwich_ok,
            "verifier_bound": self.verifier_bound,
            "constants": self.constants,
            "rejections": [r.as_dict() for r in self.rejections],
        }


def sample_ball(rng: np.random.Generator, n: int, radius: float) -> np.ndarray:
    """Uniform sample of the complex ball ``B(radius)`` in ``C^n``."""
    g = rng.standard_normal(2 * n)
    g /= np.linalg.norm(g)
    r = radius * rng.random() ** (1.0 / (2 * n))
    return r * (g[0::2] + 1j * g[1::2])


def perturbed(f: Function, w: np.ndarray) -> Function:
    """``f_w = f + w0 + sum_{j>=2} w_j z_j``."""
    n = f.n
    shift = HoloPoly.constant(n, complex(w[0]))
    for j in range(2, n + 1):
        shift = shift + HoloPoly.variable(n, j) * complex(w[j - 1])
    return f + shift


def truncation_degree(
    eta: float, taylor_constant: float, sup_norm: float, margin: float, max_degree: int
) -> int:
    """Smallest degree ``>= ceil(C |ln eta|)`` whose tail bound is ``<= eta``, capped."""
    base = int(math.ceil(taylor_constant * abs(math.log(eta))))
    ratio = 1.0 + 0.5 * margin
    needed = 0
    if sup_norm > 0:
        needed = int(math.ceil(math.log(sup_norm / (eta * (1.0 - 1.0 / ratio))) / math.log(ratio) - 1.0))
    return max(0, min(max(base, needed), max_degree))


def _check_sup(problem: PerturbationProblem) -> float:
    if problem.sup_bound is not None:
        return float(problem.sup_bound)
    sup = measure_sup(problem.f, 1.0 + problem.margin)
    if sup.measured > 1.0 + _SUP_SLACK:
        raise ValueError(
            f"|f| <= 1 on B(1 + {problem.margin}) is violated: measured sup {sup.measured:.6g}"
        )
    return sup.bound


def _base_cells(
    derivs: WallDerivatives, model: Wall, h: float, margin: float
) -> List[WallCells]:
    return [
        WallCells.build(derivs, centers, halves, margin=margin)
        for centers, halves in grids.iter_wall_cells(model.n, model.radius, h)
    ]


def _certify_candidate(
    problem: PerturbationProblem,
    base: List[WallCells],
    model: Wall,
    w: np.ndarray,
    sup_bound: float,
) -> TransversalityCertificate:
    inside, meets = wall_masks(model)
    M_w = sup_bound + abs(w[0]) + (1.0 + problem.margin) * float(np.sum(np.abs(w[1:])))
    cache: Dict[str, Any] = {}

    def evaluate(centers: np.ndarray, halves: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        if "eval" not in cache:
            derivs = WallDerivatives.of(perturbed(problem.f, w))
            cache["eval"] = wall_evaluator(derivs, margin=problem.margin, sup_bound=M_w)
        return cache["eval"](centers, halves)

    def first_level() -> Iterator[Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]]:
        for cells in base:
            tvals, lbs = cells.lower_bounds(w, sup_bound)
            yield cells.centers, cells.halfwidths, tvals, lbs

    scan = scan_cells(
        first_level(), evaluate, inside, meets,
        target=problem.eta, max_depth=problem.max_depth,
        cell_budget=problem.cell_budget, stop_on_violation=True,
    )
    return finish_scan(scan, problem.grid_step, grids.wall_to_complex, problem.eta)


def _cross_checks(
    F: FMap, F_trunc: Optional[FMap], base: List[WallCells], w: np.ndarray
) -> Tuple[float, bool]:
    distance = math.inf
    ok = True
    for cells in base:
        mask = np.linalg.norm(cells.centers, axis=1) <= 1.0 + ON_SURFACE_TOL
        if not np.any(mask):
            continue
        pts = cells.points[mask]
        approx = (F_trunc or F).evaluate(pts)
        distance = min(distance, float(np.min(np.linalg.norm(w[None, :] - approx, axis=1))))
        delta = np.linalg.norm(w[None, :] - F.evaluate(pts), axis=1)
        tvals, _ = cells.lower_bounds(w)
        tvals = tvals[mask]
        ok = ok and bool(
            np.all(delta / (2.0 * math.sqrt(2.0)) <= tvals + 1e-9)
            and np.all(tvals <= math.sqrt(5.0) * delta + 1e-9)
        )
    return distance, ok


def find_perturbation(
    problem: PerturbationProblem, verifier: Optional[Verifier] = None
) -> PerturbationCertificate:
    """Search for a certified perturbation.

    Args:
        problem: The perturbation problem.
        verifier: Optional extra acceptance test run after the wall
            certificate passes.

    Raises:
        ValueError: If ``|f| <= 1`` on ``B(1 + margin)`` is violated.
        PerturbationBudgetExhausted: If no candidate is accepted; the
            diagnostics carry the best candidate and its bound.
    """
    f = problem.f
    n = f.n
    model = Wall(n, 1.0)
    sup_bound = _check_sup(problem)
    F = f_to_F(f)

    degree: Optional[int] = None
    tail: Optional[float] = None
    F_trunc: Optional[FMap] = None
    if problem.taylor_check:
        half = 0.5 * problem.margin
        bounds = F.sup_bounds(1.0 + half)
        degree = truncation_degree(
            problem.eta, problem.taylor_constant, float(np.linalg.norm(bounds)), half, problem.max_degree
        )
        F_trunc, tail = F.truncate(degree, bounds, half)
        if tail > problem.eta:
            logger.warning(
                "Taylor tail %.3g exceeds eta=%.3g at the degree cap %d", tail, problem.eta, degree
            )

    derivs = WallDerivatives.of(f)
    base = _base_cells(derivs, model, problem.grid_step, problem.margin)
    radius = problem.allowed_radius
    rejections: List[Rejection] = []
    best_w: Optional[np.ndarray] = None
    best_bound = -math.inf

    for t in range(problem.budget):
        rng = np.random.default_rng([problem.seed, t])
        delta = min(problem.eta * (1.0 + t / 10.0), radius)
        w = sample_ball(rng, n, delta)
        cert = _certify_candidate(problem, base, model, w, sup_bound)
        norm_w = float(np.linalg.norm(w))
        if cert.bound > best_bound:
            best_bound, best_w = cert.bound, w
        if cert.bound <= problem.eta:
            reason = cert.diagnostic or "bound below eta"
            rejections.append(Rejection(t, norm_w, reason, cert.bound))
            logger.debug("candidate %d rejected: %s (bound=%.4g)", t, reason, cert.bound)
            continue
        verifier_bound = None
        if verifier is not None:
            accepted, verifier_bound = verifier(w)
            if not accepted:
                rejections.append(Rejection(t, norm_w, "verifier", float(verifier_bound)))
                logger.debug("candidate %d rejected by verifier (bound=%.4g)", t, verifier_bound)
                continue
        distance, sandwich = _cross_checks(F, F_trunc, base, w)
        logger.info(
            "perturbation accepted after %d candidates: |w|=%.4g bound=%.4g", t + 1, norm_w, cert.bound
        )
        return PerturbationCertificate(
            w=w,
            norm_w=norm_w,
            allowed_radius=radius,
            certificate=cert,
            candidates_tried=t + 1,
            degree=degree,
            taylor_tail=tail,
            tail_met=None if tail is None else tail <= problem.eta,
            f_distance_min=distance,
            sandwich_ok=sandwich,
            verifier_bound=verifier_bound,
            constants=problem.constants(),
            rejections=rejections,
        )

    raise PerturbationBudgetExhausted(
        f"No perturbation certified within {problem.budget} candidates",
        {
            "eta": problem.eta,
            "candidates_tried": problem.budget,
            "allowed_radius": radius,
            "best_w": None if best_w is None else [[x.real, x.imag] for x in best_w],
            "best_bound": best_bound if math.isfinite(best_bound) else None,
        },
    )
