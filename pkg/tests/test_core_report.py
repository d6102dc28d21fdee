"""Unit tests for :mod:`qtransverse.core.report` and :mod:`qtransverse.core.errors`."""

from __future__ import annotations

import math

import numpy as np
import pytest

from qtransverse.core.report import Report, dumps, emit_report, summary_line, validate_payload, write_csv


def test_dumps_sorts_keys_and_renders_floats_with_17_digits() -> None:
    text = dumps({"b": 0.1, "a": 1})
    assert text.index('"a"') < text.index('"b"')
    assert "0.10000000000000001" in text
    assert text.endswith("\n")


def test_dumps_handles_numpy_and_complex_values() -> None:
    text = dumps({"arr": np.array([1.0, 2.0]), "z": 1 + 2j, "flag": np.bool_(True), "n": np.int64(3)})
    assert "true" in text
    assert '"n": 3' in text
    # complex numbers are written as [re, im]
    assert "1.0" in text and "2.0" in text


def test_dumps_keeps_non_finite_floats_visible() -> None:
    text = dumps({"x": math.inf, "y": math.nan})
    assert '"inf"' in text
    assert '"nan"' in text


def test_dumps_rejects_unknown_types() -> None:
    with pytest.raises(TypeError, match="Cannot serialise"):
        dumps({"x": object()})


def test_validate_payload_reports_missing_keys() -> None:
    with pytest.raises(ValueError, match="missing required keys: slopes"):
        validate_payload({"kind": "wongkew", "rows": []})


def test_validate_payload_rejects_unknown_kind() -> None:
    with pytest.raises(ValueError, match="Unknown payload kind"):
        validate_payload({"kind": "nope"})


def test_emit_report_is_byte_identical_for_identical_input(tmp_path, monkeypatch) -> None:
    monkeypatch.delenv("SOURCE_DATE_EPOCH", raising=False)
    payload = {"kind": "moves", "word": {}, "product": "", "class_representative": ""}
    first = emit_report(Report("1.0", {"seed": 0}, payload), tmp_path / "a" / "r.json")
    second = emit_report(Report("1.0", {"seed": 0}, payload), tmp_path / "b" / "r.json")
    assert first.read_bytes() == second.read_bytes()
    assert '"created": null' in first.read_text()


def test_report_timestamp_follows_source_date_epoch(monkeypatch) -> None:
    monkeypatch.setenv("SOURCE_DATE_EPOCH", "1700000000")
    report = Report("1.0", {}, {"kind": "diagnostic", "log_derivative": {}, "weight": {}})
    assert report.timestamps == {"created": 1700000000}


def test_write_csv_has_header_and_lf_line_endings(tmp_path) -> None:
    path = write_csv([{"a": 1, "b": 2.5}, {"a": 2, "b": 3.5}], tmp_path / "t.csv", ["a", "b"])
    raw = path.read_bytes()
    assert raw.startswith(b"a,b\n")
    assert b"\r\n" not in raw
    assert raw.count(b"\n") == 3


def test_write_csv_empty_rows_still_writes_header(tmp_path) -> None:
    path = write_csv([], tmp_path / "empty.csv", ["x", "y"])
    assert path.read_text().strip() == "x,y"


def test_summary_line_joins_fields_in_order() -> None:
    assert summary_line({"N": 3, "ok": True}) == "N=3 ok=True"


def test_structured_failure_payload() -> None:
    from qtransverse.core.errors import ConstantSelectionError, StructuredFailure

    err = ConstantSelectionError("no D", {"curve": [1, 2]})
    assert isinstance(err, StructuredFailure)
    assert err.as_dict() == {"error": "no D", "kind": "constant_selection", "diagnostics": {"curve": [1, 2]}}


def test_amplitude_constant_matches_its_maximiser() -> None:
    from qtransverse.core.constants import amplitude_constant

    c = amplitude_constant()
    grid = np.linspace(0.0, 5.0, 50001)
    sampled = np.max((1 + grid) * np.exp(-5 * grid**2 / 36))
    assert c == pytest.approx(sampled, rel=1e-6)
    assert 1.8 < c < 1.9
