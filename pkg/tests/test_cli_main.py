"""End-to-end tests of the ``qtransverse`` CLI (``main(argv)``)."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Dict

import pytest

from qtransverse import cli
from qtransverse.cli import build_parser, main


def _write(tmp_path: Path, data: Dict[str, Any], name: str = "cfg.json") -> str:
    path = tmp_path / name
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


def test_parser_knows_every_subcommand() -> None:
    parser = build_parser()
    for name in ("perturb", "wongkew", "containment", "net", "color", "donaldson", "moves", "diag"):
        args = parser.parse_args([name, "--seed", "3"])
        assert args.command == name
        assert args.seed == 3


def test_moves_prints_a_summary(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    cfg = _write(
        tmp_path,
        {"word": {"rank": 2, "cycles": [[1], [2]]}, "script": [{"move": "hurwitz_left", "index": 1}]},
    )
    out = tmp_path / "moves.json"
    assert main(["moves", "--config", cfg, "--out", str(out)]) == 0
    line = capsys.readouterr().out
    assert "steps=1" in line
    assert "class_preserved=True" in line
    report = json.loads(out.read_text(encoding="utf-8"))
    assert report["payload"]["kind"] == "moves"
    assert report["payload"]["product_preserved"] is True


def test_missing_config_is_bad_input(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["moves", "--config", str(tmp_path / "nope.json")]) == 2
    err = json.loads(capsys.readouterr().err)
    assert err["kind"] == "FileNotFoundError"


def test_unknown_override_is_bad_input(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    cfg = _write(tmp_path, {"bogus": 1})
    assert main(["net", "--config", cfg]) == 2
    err = json.loads(capsys.readouterr().err)
    assert "Unknown override key 'bogus'" in err["error"]


def test_perturbation_failure_exits_with_one(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    cfg = _write(tmp_path, {"f": {"n": 1, "terms": []}, "eta": 0.3, "budget": 1})
    assert main(["perturb", "--config", cfg]) == 1
    err = json.loads(capsys.readouterr().err)
    assert err["kind"] == "budget_exhausted"
    assert err["diagnostics"]["candidates_tried"] == 1


def test_net_report_is_byte_identical(
    tmp_path: Path, monkeypatch: pytest.MonkeyPatch, capsys: pytest.CaptureFixture[str]
) -> None:
    monkeypatch.delenv("SOURCE_DATE_EPOCH", raising=False)
    cfg = _write(tmp_path, {"k": 2.0})
    first, second, table = tmp_path / "a.json", tmp_path / "b.json", tmp_path / "net.csv"
    assert main(["net", "--config", cfg, "--seed", "5", "--out", str(first), "--csv", str(table)]) == 0
    assert main(["net", "--config", cfg, "--seed", "5", "--out", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()
    report = json.loads(first.read_text(encoding="utf-8"))
    assert report["timestamps"]["created"] is None
    assert report["config"]["seed"] == 5
    assert report["payload"]["separations_verified"] is True
    assert table.read_text(encoding="utf-8").startswith("index,re_z1,im_z1\n")
    assert "verified=True" in capsys.readouterr().out


def test_color_summary(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    cfg = _write(tmp_path, {"k": 2.0, "D": 2.0})
    assert main(["color", "--config", cfg]) == 0
    assert "M=" in capsys.readouterr().out


def test_diag_defaults(tmp_path: Path) -> None:
    out = tmp_path / "diag.json"
    assert main(["diag", "--out", str(out)]) == 0
    payload = json.loads(out.read_text(encoding="utf-8"))["payload"]
    assert payload["kind"] == "diagnostic"
    assert payload["weight"]["margin"] == pytest.approx(3.0)


def test_diag_weight_close_to_zero(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    cfg = _write(tmp_path, {"weight_x": -0.001})
    out = tmp_path / "diag.json"
    assert main(["diag", "--config", cfg, "--out", str(out)]) == 0
    weight = json.loads(out.read_text(encoding="utf-8"))["payload"]["weight"]
    assert weight["margin"] == pytest.approx(1000.0)
    assert weight["g1"] == "inf"
    assert weight["log_g1"] == pytest.approx(1000.0)
    assert "margin=1000" in capsys.readouterr().out


def test_arithmetic_errors_exit_with_one(
    monkeypatch: pytest.MonkeyPatch, capsys: pytest.CaptureFixture[str]
) -> None:
    def overflow(cfg: Any) -> Any:
        raise OverflowError("math range error")

    monkeypatch.setitem(cli.HANDLERS, "diag", overflow)
    assert main(["diag"]) == 1
    failure = json.loads(capsys.readouterr().err)
    assert failure["kind"] == "OverflowError"
    assert failure["error"] == "math range error"


def test_containment_of_the_parabola(tmp_path: Path) -> None:
    F = [
        {"n": 1, "terms": [{"alpha": [1], "re": 1.0}]},
        {"n": 1, "terms": [{"alpha": [2], "re": 1.0}]},
    ]
    cfg = _write(tmp_path, {"F": F})
    out = tmp_path / "containment.json"
    assert main(["containment", "--config", cfg, "--out", str(out)]) == 0
    payload = json.loads(out.read_text(encoding="utf-8"))["payload"]
    assert payload["degree"] == 2
    assert payload["residual"] < 1e-8


def test_wongkew_csv(tmp_path: Path) -> None:
    cfg = _write(tmp_path, {"degrees": [1, 2], "epsilons": [0.1, 0.05], "samples": 500, "descent_steps": 10})
    table = tmp_path / "wk.csv"
    assert main(["wongkew", "--config", cfg, "--csv", str(table)]) == 0
    lines = table.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "d,eps,estimate,ci,misses,failures"
    assert len(lines) == 1 + 4


@pytest.mark.slow
def test_donaldson_on_a_small_circle(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    cfg = _write(tmp_path, {"k": 2.0, "D": 2.0})
    out, table = tmp_path / "construction.json", tmp_path / "colors.csv"
    assert main(["donaldson", "--config", cfg, "--out", str(out), "--csv", str(table)]) == 0
    payload = json.loads(out.read_text(encoding="utf-8"))["payload"]
    assert payload["kind"] == "construction"
    assert payload["final_certificate"]["bound"] > 0
    assert table.read_text(encoding="utf-8").startswith("color,eta,floor,bound,ok\n")
    assert "certified_min=" in capsys.readouterr().out
