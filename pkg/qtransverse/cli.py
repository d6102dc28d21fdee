"""qtransverse command-line interface.

Subcommands:

* ``perturb``: certified perturbation of a function on the wall
* ``wongkew``: tube-volume scan of random plane curves
* ``containment``: a hypersurface containing the image of a polynomial map
* ``net`` / ``color``: greedy separated nets and colorings on the sphere
* ``donaldson``: the full construction in the flat model
* ``moves``: apply a move script to a Lefschetz word
* ``diag``: log-derivative diagnostic and the complete weight

Every subcommand takes ``--config`` (JSON), ``--seed``, ``--out`` and
``--csv``. Reports go to ``--out``; stdout carries one summary line.
Exit codes: 0 success, 1 structured mathematical failure or arithmetic
error, 2 bad input.
Handlers import their subsystem lazily.
"""

from __future__ import annotations

import argparse
import logging
import sys
from typing import Any, Callable, Dict, List, Mapping, Optional, Tuple

from qtransverse.config import RunConfig, load_config, load_defaults
from qtransverse.core.errors import StructuredFailure
from qtransverse.core.report import Report, dumps, emit_report, summary_line, write_csv

logger = logging.getLogger(__name__)

#: Handler result: report payload, summary fields, optional CSV rows and columns.
Outcome = Tuple[Dict[str, Any], Dict[str, Any], Optional[Tuple[List[Mapping[str, Any]], List[str]]]]


def _format(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def _parse_function(data: Any) -> Any:
    from qtransverse.polycore import ExpAffinePoly, HoloPoly  # deferred

    if not isinstance(data, Mapping):
        raise ValueError("The 'f' entry must be a polynomial or exponential-sum table")
    terms = data.get("terms", [])
    if terms and isinstance(terms[0], Mapping) and "poly" in terms[0]:
        return ExpAffinePoly.from_dict(data)
    return HoloPoly.from_dict(data)


def _cmd_perturb(cfg: RunConfig) -> Outcome:
    from qtransverse.perturbation import PerturbationProblem, find_perturbation  # deferred

    if "f" not in cfg.data:
        raise ValueError("perturb needs an 'f' entry in the config")
    params = cfg.parameters()
    problem = PerturbationProblem(f=_parse_function(cfg.data["f"]), seed=cfg.seed, **params)
    found = find_perturbation(problem)
    payload = {"kind": "perturbation", **found.as_dict()}
    summary = {
        "norm_w": found.norm_w,
        "bound": found.certificate.bound,
        "candidates": found.candidates_tried,
    }
    rows = [r.as_dict() for r in found.rejections]
    return payload, summary, (rows, ["draw", "norm_w", "reason", "bound"])


def _cmd_wongkew(cfg: RunConfig) -> Outcome:
    from qtransverse.algvar import WONGKEW_COLUMNS, wongkew_scan  # deferred

    params = cfg.parameters()
    scan = wongkew_scan(
        params["degrees"], params["epsilons"], int(params["samples"]), cfg.seed,
        steps=int(params["descent_steps"]),
    )
    payload = {"kind": "wongkew", **scan.as_dict()}
    summary = {"degrees": len(scan.slopes), "rows": len(scan.rows)}
    return payload, summary, (scan.rows, WONGKEW_COLUMNS)


def _cmd_containment(cfg: RunConfig) -> Outcome:
    from qtransverse.algvar import containment_hypersurface, polys_from_dicts  # deferred

    if "F" not in cfg.data:
        raise ValueError("containment needs an 'F' entry in the config")
    params = cfg.parameters()
    F = polys_from_dicts(cfg.data["F"])
    bound = params.get("degree_bound")
    witness = containment_hypersurface(F, None if bound is None else int(bound), seed=cfg.seed)
    payload = {"kind": "containment", **witness.as_dict()}
    summary = {"degree": witness.degree, "degree_bound": witness.degree_bound, "residual": witness.residual}
    return payload, summary, None


def _sphere_net(cfg: RunConfig) -> Tuple[Any, Dict[str, Any]]:
    from qtransverse.levi import Sphere  # deferred
    from qtransverse.nets import greedy_net, sample_boundary

    params = cfg.parameters()
    model = Sphere(int(params["n"]), float(params["k"]))
    cloud = sample_boundary(model, float(params["density"]), cfg.seed)
    return greedy_net(cloud, float(params["separation"])), params


def _cmd_net(cfg: RunConfig) -> Outcome:
    from qtransverse.nets import points_as_rows, verify_net  # deferred

    net, params = _sphere_net(cfg)
    check = verify_net(net)
    payload = {
        "kind": "net",
        **net.as_dict(),
        "k": float(params["k"]),
        "separations_verified": check.ok,
        "check": check.as_dict(),
        "covering_radius": check.covering_radius,
    }
    summary = {"N": len(net), "verified": check.ok, "covering_radius": check.covering_radius}
    rows = points_as_rows(net)
    return payload, summary, (rows, list(rows[0]) if rows else ["index"])


def _cmd_color(cfg: RunConfig) -> Outcome:
    from qtransverse.nets import colors_as_rows, greedy_coloring, verify_coloring  # deferred

    net, params = _sphere_net(cfg)
    coloring = greedy_coloring(net, float(params["D"]))
    check = verify_coloring(coloring)
    payload = {
        "kind": "coloring",
        **coloring.as_dict(),
        "k": float(params["k"]),
        "separations_verified": check.ok,
        "check": check.as_dict(),
    }
    summary = {"N": len(net), "M": coloring.M, "verified": check.ok}
    rows = colors_as_rows(coloring)
    return payload, summary, (rows, list(rows[0]) if rows else ["index", "color"])


def _cmd_donaldson(cfg: RunConfig) -> Outcome:
    from qtransverse.pipeline import (  # deferred
        CONSTRUCTION_COLUMNS,
        ConstructionParams,
        FlatModel,
        donaldson_construct,
    )

    params = cfg.parameters()
    model = FlatModel(int(params["n"]), float(params["k"]))
    report = donaldson_construct(model, params=ConstructionParams.from_config(params), seed=cfg.seed)
    payload = {"kind": "construction", **report.as_dict()}
    summary = {
        "N": len(report.net),
        "M": report.coloring.M,
        "D": report.schedule.D,
        "certified_min": report.certified_min,
        "sup": report.verification.sup.bound,
    }
    return payload, summary, (report.csv_rows(), CONSTRUCTION_COLUMNS)


def _cmd_moves(cfg: RunConfig) -> Outcome:
    from qtransverse.lefmoves import LefschetzWord, apply_moves, total_monodromy  # deferred

    if "word" not in cfg.data:
        raise ValueError("moves needs a 'word' entry in the config")
    word = LefschetzWord.from_dict(cfg.data["word"])
    script = cfg.data.get("script", [])
    if not isinstance(script, list):
        raise ValueError("script must be a list of moves")
    trace = apply_moves(word, script)
    before, after = total_monodromy(word), total_monodromy(trace[-1])
    payload = {
        "kind": "moves",
        "input": word.to_dict(),
        "word": trace[-1].to_dict(),
        "trace": [w.to_dict() for w in trace],
        **after.as_dict(),
        "product_preserved": before.product == after.product,
        "class_preserved": before.representative == after.representative,
    }
    summary = {
        "steps": len(trace) - 1,
        "rank": trace[-1].rank,
        "cycles": len(trace[-1]),
        "class_preserved": payload["class_preserved"],
    }
    return payload, summary, None


def _cmd_diag(cfg: RunConfig) -> Outcome:
    from qtransverse.pipeline import (  # deferred
        FlatModel,
        PeakCombination,
        complete_weight_g,
        log_derivative_diagnostic,
    )

    params = cfg.parameters()
    if "section" in cfg.data:
        section = PeakCombination.from_dict(cfg.data["section"])
    else:
        model = FlatModel(int(params["n"]), float(params["k"]))
        p = [1.0] + [0.0] * (model.n - 1)
        section = PeakCombination.single(model, p)
    diag = log_derivative_diagnostic(section, float(params["floor"]), float(params["probe_step"]))
    weight = complete_weight_g(float(params["weight_x"]))
    payload = {"kind": "diagnostic", "log_derivative": diag.as_dict(), "weight": weight.as_dict()}
    summary = {"normalized_sup": diag.normalized_sup, "empty": diag.empty, "margin": weight.margin}
    return payload, summary, None


HANDLERS: Dict[str, Callable[[RunConfig], Outcome]] = {
    "perturb": _cmd_perturb,
    "wongkew": _cmd_wongkew,
    "containment": _cmd_containment,
    "net": _cmd_net,
    "color": _cmd_color,
    "donaldson": _cmd_donaldson,
    "moves": _cmd_moves,
    "diag": _cmd_diag,
}

_HELP = {
    "perturb": "Certified transversality-restoring perturbation on the wall.",
    "wongkew": "Tube volumes of random plane curves across degrees and radii.",
    "containment": "Hypersurface containing the image of a polynomial map.",
    "net": "Greedy 1-separated net on the sphere.",
    "color": "Greedy D-separated coloring of the net.",
    "donaldson": "Full construction in the flat model.",
    "moves": "Apply a move script to a Lefschetz word.",
    "diag": "Log-derivative diagnostic and the complete weight.",
}


def _add_common_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", default=None, help="JSON config file (overrides and input data).")
    parser.add_argument("--seed", type=int, default=None, help="Unsigned 64-bit seed (default: 0).")
    parser.add_argument("--out", default=None, help="Report JSON destination.")
    parser.add_argument("--csv", default=None, help="Optional CSV side output.")
    parser.add_argument("--verbose", action="store_true", help="Log INFO messages to stderr.")


def build_parser() -> argparse.ArgumentParser:
    """Build the CLI argument parser.

    Returns:
        argparse.ArgumentParser: parser for the ``qtransverse`` entrypoint.
    """
    parser = argparse.ArgumentParser(prog="qtransverse", description="Quantitative transversality toolkit")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in HANDLERS:
        p = sub.add_parser(name, help=_HELP[name])
        _add_common_args(p)
    return parser


def _fail(payload: Mapping[str, Any], code: int) -> int:
    sys.stderr.write(dumps(payload))
    return code


def run(args: argparse.Namespace) -> int:
    """Resolve the config, run one handler and write its outputs."""
    from qtransverse import __version__

    try:
        cfg = load_config(args.command, args.config, seed=args.seed, out=args.out, csv=args.csv)
        payload, summary, table = HANDLERS[args.command](cfg)
        if cfg.output_path is not None:
            config_echo = {**cfg.as_dict(), "defaults": load_defaults()}
            emit_report(Report(__version__, config_echo, payload), cfg.output_path)
        if cfg.csv_path is not None and table is not None:
            rows, columns = table
            write_csv(rows, cfg.csv_path, columns)
    except StructuredFailure as err:
        logger.error("%s failed: %s", args.command, err)
        return _fail(err.as_dict(), 1)
    except ArithmeticError as err:
        logger.error("%s failed numerically: %s", args.command, err)
        return _fail({"error": str(err), "kind": type(err).__name__, "diagnostics": {}}, 1)
    except (ValueError, TypeError, FileNotFoundError, KeyError) as err:
        kind = type(err).__name__
        return _fail({"error": str(err), "kind": kind, "diagnostics": {}}, 2)
    print(summary_line(summary, _format))
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    """CLI entrypoint.

    Args:
        argv: Optional argv override for testing.

    Returns:
        int: process exit code.
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    return run(args)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
