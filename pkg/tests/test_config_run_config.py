"""Unit tests for :mod:`qtransverse.config`: defaults table and run configs."""

from __future__ import annotations

import json

import pytest

from qtransverse.config import load_config, load_defaults
from qtransverse.config.defaults import REQUIRED_SECTIONS, defaults_version, section
from qtransverse.config.run_config import RunConfig, merge_overrides


def test_defaults_table_has_every_section() -> None:
    table = load_defaults()
    assert isinstance(table["version"], int)
    for name in REQUIRED_SECTIONS:
        assert isinstance(table[name], dict)


def test_load_defaults_returns_a_copy() -> None:
    table = load_defaults()
    table["pipeline"]["k"] = -1
    assert load_defaults()["pipeline"]["k"] == 200.0


def test_unknown_section_lists_available() -> None:
    with pytest.raises(ValueError, match="Available sections: .*pipeline"):
        section("nope")


def test_merge_overrides_rejects_unknown_keys() -> None:
    with pytest.raises(ValueError, match="Unknown override key 'budgets.bogus'"):
        merge_overrides({"budgets": {"max_depth": 1}}, {"budgets": {"bogus": 2}})


def test_merge_overrides_merges_nested_sections() -> None:
    merged = merge_overrides({"a": 1, "budgets": {"x": 1, "y": 2}}, {"budgets": {"y": 5}})
    assert merged == {"a": 1, "budgets": {"x": 1, "y": 5}}


def test_load_config_splits_data_and_overrides(tmp_path) -> None:
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"word": {"rank": 1, "cycles": []}, "script": [], "seed": 7}))
    cfg = load_config("moves", path)
    assert cfg.seed == 7
    assert set(cfg.data) == {"word", "script"}
    assert cfg.overrides == {}


def test_cli_seed_wins_over_file_seed() -> None:
    cfg = load_config("net", {"seed": 3, "k": 50.0}, seed=11)
    assert cfg.seed == 11
    assert cfg.parameters()["k"] == 50.0


def test_missing_config_file_raises(tmp_path) -> None:
    with pytest.raises(FileNotFoundError, match="Config file not found"):
        load_config("net", tmp_path / "missing.json")


def test_malformed_json_is_a_value_error(tmp_path) -> None:
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(ValueError, match="not valid JSON"):
        load_config("net", path)


@pytest.mark.parametrize("seed", [-1, 1 << 64, True])
def test_invalid_seed_is_rejected(seed) -> None:
    with pytest.raises(ValueError, match="seed"):
        RunConfig("net", seed=seed)


def test_unknown_subcommand() -> None:
    with pytest.raises(ValueError, match="Unknown subcommand"):
        RunConfig("simulate")


def test_config_echo_excludes_paths(tmp_path) -> None:
    cfg = load_config("diag", {}, out=tmp_path / "r.json")
    echo = cfg.as_dict()
    assert echo["defaults_version"] == defaults_version()
    assert "output_path" not in echo
    assert echo["parameters"]["floor"] == 0.1
