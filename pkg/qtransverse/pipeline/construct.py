"""The iterative construction of an approximately holomorphic section on the sphere.

Net (separation 1) -> coloring (separation ``D``) -> for each color ``j`` and
each point ``p_i`` of that color, in net order:

1. pull ``s / sigma_{p_i}`` back to the rescaled chart at ``p_i``;
2. normalize it by ``S >= sup`` on ``B(1 + margin)`` and ask the wall
   engine for ``w`` with ``|w| <= cap / S``;
3. accept ``w`` only if the updated section is certified above the color
   floor on the true sphere, around ``p_i`` and the processed points near it;
4. add ``S (w0 sigma + sum_r w_r sigma zeta_r)`` at ``p_i``.

Every color round ends with a certificate on the union of the unit balls
processed so far. Levels are measured in amplitude units
``kappa = 1 / (A C)``: the coefficient cap of color ``j`` is
``kappa eta_{j-1}``, its floor is ``kappa eta_j``.
"""

from __future__ import annotations

import dataclasses
import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Mapping, Optional, Tuple

import numpy as np

from qtransverse.core.errors import ConstructionAborted, PerturbationBudgetExhausted
from qtransverse.levi import TransversalityCertificate, certified_min
from qtransverse.nets import Coloring, Net, greedy_coloring, greedy_net, sample_boundary
from qtransverse.perturbation import PerturbationProblem, find_perturbation
from qtransverse.polycore import SupBound

from .flat import FlatModel, PeakCombination, chart_frame
from .schedule import Schedule, select_constants
from .verify import GlobalVerification, verify_global

logger = logging.getLogger(__name__)

#: Share of the floor a single new term may cost outside its influence radius.
_INFLUENCE_SHARE = 0.05

#: Wall-certified levels are divided by this to leave room for the sphere.
_WALL_HEADROOM = 0.9

#: The final sphere bound must exceed this share of the last floor.
FINAL_SHARE = 0.9

CONSTRUCTION_COLUMNS = ["color", "eta", "floor", "bound", "ok"]


@dataclass(frozen=True)
class ConstructionParams:
    """Engineering constants of :func:`donaldson_construct`."""

    p_exponent: float = 3.0
    A: float = 8.0
    B: float = 10.0
    D: Optional[float] = None
    density: float = 4.0
    margin: float = 0.25
    wall_step: float = 0.125
    sphere_step: float = 0.25
    sup_step: float = 0.25
    cutoff: float = 24.0
    neighborhood: float = 3.0
    taylor_check: bool = False
    max_candidates: int = 2000
    max_depth: int = 8
    cell_budget: int = 100_000

    def __post_init__(self) -> None:
        for name in ("density", "margin", "wall_step", "sphere_step", "sup_step", "cutoff"):
            value = getattr(self, name)
            if not value > 0:
                raise ValueError(f"{name} must be > 0, got {value}")
        if self.D is not None and self.D < 1:
            raise ValueError(f"D must be >= 1, got {self.D}")

    @classmethod
    def from_config(cls, section: Mapping[str, Any]) -> "ConstructionParams":
        """Build from the ``pipeline`` defaults section (``n`` and ``k`` are ignored)."""
        budgets = dict(section.get("budgets") or {})
        names = {f.name for f in dataclasses.fields(cls)}
        values = {key: value for key, value in section.items() if key in names}
        values.update({key: value for key, value in budgets.items() if key in names})
        return cls(**values)

    def as_dict(self) -> Dict[str, Any]:
        return dataclasses.asdict(self)


@dataclass
class PointRecord:
    """What happened at one net point."""

    index: int
    center: List[complex]
    color: int
    coeff: List[complex]
    amplitude: float
    cap: float
    scale: float
    eta: float
    wall_bound: float
    sphere_bound: Optional[float]
    candidates: int
    tail: float
    wall_gap: float
    wall_gap_ok: bool

    def as_dict(self) -> Dict[str, Any]:
        return dataclasses.asdict(self)


@dataclass
class ColorRecord:
    """Certificate of the processed region after one color round."""

    color: int
    eta: float
    floor: float
    bound: float
    ok: bool
    points: int

    def as_dict(self) -> Dict[str, Any]:
        return dataclasses.asdict(self)


@dataclass
class ConstructionReport:
    """Result of :func:`donaldson_construct`.

    ``section`` is normalized: its sup over ``{phi <= 1}`` is at most 1.
    ``verification`` holds the sup and the sphere certificate of the
    normalized section.
    """

    model: FlatModel
    net: Net
    coloring: Coloring
    schedule: Schedule
    params: ConstructionParams
    points: List[PointRecord]
    colors: List[ColorRecord]
    section: PeakCombination
    verification: GlobalVerification
    normalization: float

    @property
    def certified_min(self) -> float:
        return self.verification.certificate.bound

    def csv_rows(self) -> List[Dict[str, Any]]:
        """Rows ``(color, eta, floor, bound, ok)`` for the side CSV."""
        return [{col: getattr(rec, col) for col in CONSTRUCTION_COLUMNS} for rec in self.colors]

    def as_dict(self) -> Dict[str, Any]:
        return {
            "model": self.model.as_dict(),
            "net": self.net.as_dict(),
            "coloring": self.coloring.as_dict(),
            "schedule": self.schedule.as_dict(),
            "params": self.params.as_dict(),
            "points": [rec.as_dict() for rec in self.points],
            "colors": [rec.as_dict() for rec in self.colors],
            "section": self.section.to_dict(),
            "final_certificate": self.verification.certificate.as_dict(),
            "sup": self.verification.sup.as_dict(),
            "normalization": self.normalization,
        }


def influence_radius(cap: float, floor: float) -> float:
    """Smallest ``d >= 1`` (step 1/4) with ``(1 + d)(1 + d/2) e^{-d^2/4} cap <= share * floor``.

    Beyond this ``d_k`` distance a new term of amplitude ``<= cap`` moves
    the transversality by less than the share of the floor.
    """
    d = 1.0
    while (1.0 + d) * (1.0 + 0.5 * d) * math.exp(-0.25 * d * d) * cap > _INFLUENCE_SHARE * floor:
        d += 0.25
    return d


def _point_seed(seed: int, index: int) -> int:
    return int(np.random.SeedSequence([seed, index]).generate_state(1, dtype=np.uint64)[0])


def _scaled_certificate(
    cert: TransversalityCertificate, factor: float
) -> TransversalityCertificate:
    return dataclasses.replace(
        cert,
        grid_min=cert.grid_min / factor,
        slack=cert.slack / factor,
        bound=cert.bound / factor,
        target=None if cert.target is None else cert.target / factor,
    )


def _resolve_schedule(
    model: FlatModel, net: Net, schedule: Optional[Schedule], params: ConstructionParams
) -> Tuple[Schedule, Coloring]:
    if schedule is not None:
        coloring = greedy_coloring(net, schedule.D)
        if coloring.M > schedule.M:
            raise ValueError(
                f"Schedule has M={schedule.M} levels but the D={schedule.D} coloring needs {coloring.M}"
            )
        return schedule, coloring
    if params.D is not None:
        coloring = greedy_coloring(net, params.D)
        schedule = Schedule.build(
            params.p_exponent, params.A, params.B, float(params.D), coloring.M, D_override=True
        )
        return schedule, coloring
    schedule = select_constants(
        model.n, params.p_exponent, params.B, lambda D: greedy_coloring(net, D).M, A=params.A
    )
    return schedule, greedy_coloring(net, schedule.D)


def _partial(
    points: List[PointRecord], colors: List[ColorRecord], schedule: Schedule, net: Net
) -> Dict[str, Any]:
    return {
        "N": len(net),
        "schedule": schedule.as_dict(),
        "points": [
            {**rec.as_dict(), "center": [[z.real, z.imag] for z in rec.center],
             "coeff": [[a.real, a.imag] for a in rec.coeff]}
            for rec in points
        ],
        "colors": [rec.as_dict() for rec in colors],
    }


def donaldson_construct(
    model: FlatModel,
    schedule: Optional[Schedule] = None,
    params: Optional[ConstructionParams] = None,
    seed: int = 0,
    *,
    net: Optional[Net] = None,
) -> ConstructionReport:
    """Build a section of the flat model transverse to zero on the unit sphere.

    Args:
        model: The flat model.
        schedule: Explicit schedule; selected from the measured coloring
            counts when ``None`` (or built from ``params.D`` when set).
        params: Engineering constants and budgets.
        seed: Seed of the cloud offsets and of every per-point search.
        net: Use this net instead of a greedy net of a sampled cloud.

    Raises:
        ConstructionAborted: On an empty net, a failed per-point search, or
            a final certificate at or below ``0.9 kappa eta_M``; the
            diagnostics hold the partial report.
        ConstantSelectionError: If no separation satisfies the selection
            inequality.
    """
    params = params or ConstructionParams()
    sphere = model.sphere
    if net is None:
        net = greedy_net(sample_boundary(sphere, params.density, seed), 1.0)
    if len(net) == 0:
        raise ConstructionAborted("empty net", {"N": 0, "model": model.as_dict()})
    schedule, coloring = _resolve_schedule(model, net, schedule, params)
    logger.info(
        "Construction on n=%d k=%g: N=%d net points, D=%g, M=%d colors",
        model.n, model.k, len(net), schedule.D, coloring.M,
    )
    for row in schedule.key_inequality_margins():
        if not row["holds"]:
            logger.warning("Selection inequality fails at j=%d: %.3g > %.3g", row["j"], row["lhs"], row["rhs"])

    s = PeakCombination.zero(model)
    points: List[PointRecord] = []
    colors: List[ColorRecord] = []
    centers = net.points
    processed: List[int] = []
    radius = 1.0 + params.margin

    for j, members in enumerate(coloring.classes(), start=1):
        floor, cap = schedule.floor(j), schedule.cap(j)
        tau = floor * math.exp(0.25) / _WALL_HEADROOM
        reach = max(params.neighborhood, influence_radius(cap, floor) + 1.0)
        logger.info("Color %d/%d: %d points, floor=%.3g cap=%.3g", j, coloring.M, len(members), floor, cap)
        for pos in members:
            p = centers[pos]
            frame = chart_frame(p)
            Q, tail = s.chart_quotient(p, frame, cutoff=params.cutoff, radius=radius)
            majorant = Q.majorant(radius)
            S = max(majorant + tail, 4.0 * tau)
            done = centers[processed] if processed else np.zeros((0, model.n), dtype=complex)
            near = done[model.distance(done, p[None, :]) <= reach] if len(done) else done
            patch = np.concatenate([near, p[None, :]])
            current = s

            def verifier(w: np.ndarray) -> Tuple[bool, float]:
                candidate = current.with_point(p, S * w)
                cert = certified_min(
                    candidate, sphere, params.sphere_step,
                    target=floor, max_depth=params.max_depth, cell_budget=params.cell_budget,
                    center=patch, patch_radius=1.0,
                )
                return cert.bound > floor, cert.bound

            problem = PerturbationProblem(
                f=Q * (1.0 / S),
                eta=tau / S,
                p_exponent=schedule.p_exponent,
                margin=params.margin,
                budget=params.max_candidates,
                seed=_point_seed(seed, int(net.indices[pos])),
                taylor_check=params.taylor_check,
                grid_step=params.wall_step,
                max_depth=params.max_depth,
                cell_budget=params.cell_budget,
                max_radius=cap / S,
                sup_bound=(majorant + tail) / S,
            )
            try:
                found = find_perturbation(problem, verifier)
            except PerturbationBudgetExhausted as err:
                raise ConstructionAborted(
                    f"Perturbation search failed at net point {int(net.indices[pos])} (color {j})",
                    {**_partial(points, colors, schedule, net), "failure": err.diagnostics},
                ) from err
            coeff = S * found.w
            s = s.with_point(p, coeff)
            processed.append(int(pos))
            gap = 0.5 * model.eps * problem.sup_bound / params.margin
            points.append(
                PointRecord(
                    index=int(net.indices[pos]),
                    center=[complex(z) for z in p],
                    color=j,
                    coeff=[complex(a) for a in coeff],
                    amplitude=float(np.linalg.norm(coeff)),
                    cap=cap,
                    scale=S,
                    eta=problem.eta,
                    wall_bound=found.certificate.bound,
                    sphere_bound=found.verifier_bound,
                    candidates=found.candidates_tried,
                    tail=tail,
                    wall_gap=gap,
                    wall_gap_ok=gap < 0.1 * problem.eta,
                )
            )

        cert = certified_min(
            s, sphere, params.sphere_step,
            target=floor, max_depth=params.max_depth, cell_budget=params.cell_budget,
            center=centers[processed], patch_radius=1.0,
        )
        ok = cert.bound > floor
        colors.append(ColorRecord(j, schedule.eta(j), floor, cert.bound, ok, len(processed)))
        if not ok:
            logger.warning("Color %d: processed region certified at %.3g, floor %.3g", j, cert.bound, floor)

    last = FINAL_SHARE * schedule.floor(coloring.M)
    check = verify_global(
        s,
        sphere_step=params.sphere_step,
        sup_step=params.sup_step,
        target=last,
        max_depth=params.max_depth,
        cell_budget=params.cell_budget,
    )
    if not (check.certificate.bound > last and check.certificate.bound > 0):
        raise ConstructionAborted(
            f"Final sphere bound {check.certificate.bound:.3g} does not exceed {last:.3g}",
            {
                **_partial(points, colors, schedule, net),
                "final_certificate": check.certificate.as_dict(),
                "sup": check.sup.as_dict(),
            },
        )

    factor = max(1.0, check.sup.bound)
    normalized = GlobalVerification(
        sup=SupBound(*(value / factor for value in check.sup)),
        certificate=_scaled_certificate(check.certificate, factor),
    )
    logger.info(
        "Construction done: certified min %.4g, sup %.4g, normalization %.4g",
        normalized.certificate.bound, normalized.sup.bound, factor,
    )
    return ConstructionReport(
        model=model,
        net=net,
        coloring=coloring,
        schedule=schedule,
        params=params,
        points=points,
        colors=colors,
        section=s.scaled(1.0 / factor),
        verification=normalized,
        normalization=factor,
    )
