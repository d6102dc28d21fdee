"""Run configuration: normalize and resolve CLI parameters.

A run is described by a subcommand, an optional JSON config file, a seed
and output paths. The JSON file mixes two kinds of keys:

* data keys specific to a subcommand (the polynomial ``f`` of ``perturb``,
  the ``word`` and ``script`` of ``moves``...), passed through untouched;
* parameter overrides, validated against the defaults section of the
  subcommand. Unknown keys are rejected.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Tuple, Union

from .defaults import defaults_version, section

#: Defaults section backing each subcommand (``None``: no tunables).
SUBCOMMAND_SECTIONS: Dict[str, Optional[str]] = {
    "perturb": "perturbation",
    "wongkew": "algvar",
    "containment": "algvar",
    "net": "nets",
    "color": "nets",
    "donaldson": "pipeline",
    "moves": None,
    "diag": "diag",
}

#: Input-data keys each subcommand accepts besides its overrides.
DATA_KEYS: Dict[str, Tuple[str, ...]] = {
    "perturb": ("f",),
    "containment": ("F",),
    "moves": ("word", "script"),
    "diag": ("section",),
}

_SEED_LIMIT = 1 << 64


def _validate_seed(seed: Any) -> int:
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise ValueError(f"seed must be an integer, got {seed!r}")
    if not 0 <= seed < _SEED_LIMIT:
        raise ValueError(f"seed must lie in [0, 2**64), got {seed}")
    return seed


def merge_overrides(
    base: Mapping[str, Any], overrides: Mapping[str, Any], where: str = ""
) -> Dict[str, Any]:
    """Return ``base`` updated with ``overrides``, rejecting unknown keys.

    Nested mappings (``budgets``) are merged key by key.

    Raises:
        ValueError: On unknown keys (the message lists the valid keys) or
            when a nested section is overridden by a scalar.
    """
    merged = dict(base)
    for key, value in overrides.items():
        if key not in base:
            valid = ", ".join(sorted(base)) or "(none)"
            raise ValueError(f"Unknown override key '{where}{key}'. Valid keys: {valid}")
        if isinstance(base[key], Mapping):
            if not isinstance(value, Mapping):
                raise ValueError(f"Override '{where}{key}' must be a mapping.")
            merged[key] = merge_overrides(base[key], value, where=f"{where}{key}.")
        else:
            merged[key] = value
    return merged


@dataclass(frozen=True)
class RunConfig:
    """Resolved configuration of one CLI run.

    Attributes:
        subcommand: One of :data:`SUBCOMMAND_SECTIONS`.
        input_path: JSON config file, if any.
        output_path: Report destination.
        csv_path: Optional CSV side output.
        seed: 64-bit unsigned seed (default 0).
        overrides: Parameter overrides for the subcommand's section.
        data: Subcommand input data (polynomials, words...).
    """

    subcommand: str
    input_path: Optional[Path] = None
    output_path: Optional[Path] = None
    csv_path: Optional[Path] = None
    seed: int = 0
    overrides: Mapping[str, Any] = field(default_factory=dict)
    data: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.subcommand not in SUBCOMMAND_SECTIONS:
            available = ", ".join(sorted(SUBCOMMAND_SECTIONS))
            raise ValueError(f"Unknown subcommand '{self.subcommand}'. Available: {available}")
        _validate_seed(self.seed)
        self.parameters()

    def parameters(self) -> Dict[str, Any]:
        """Section defaults with the overrides applied."""
        name = SUBCOMMAND_SECTIONS[self.subcommand]
        base = section(name) if name else {}
        return merge_overrides(base, self.overrides)

    def as_dict(self) -> Dict[str, Any]:
        """Config echo written into reports (paths excluded for determinism)."""
        return {
            "subcommand": self.subcommand,
            "seed": self.seed,
            "defaults_version": defaults_version(),
            "parameters": self.parameters(),
        }


def load_config(
    subcommand: str,
    cfg: Union[RunConfig, Mapping[str, Any], str, Path, None] = None,
    *,
    seed: Optional[int] = None,
    out: Union[str, Path, None] = None,
    csv: Union[str, Path, None] = None,
) -> RunConfig:
    """Normalize ``cfg`` into a :class:`RunConfig`.

    Args:
        subcommand: Subcommand being run.
        cfg: ``RunConfig`` (returned as-is), a mapping of config keys, a path
            to a JSON file, or ``None`` for defaults only.
        seed: Seed from the command line; wins over a ``seed`` key in the file.
        out: Report path.
        csv: CSV side-output path.

    Raises:
        FileNotFoundError: If the config path does not exist.
        ValueError: On malformed JSON, unknown keys or an invalid seed.
    """
    if isinstance(cfg, RunConfig):
        return cfg
    input_path: Optional[Path] = None
    if cfg is None:
        raw: Dict[str, Any] = {}
    elif isinstance(cfg, (str, Path)):
        input_path = Path(cfg)
        if not input_path.is_file():
            raise FileNotFoundError(f"Config file not found: {input_path}")
        try:
            raw = json.loads(input_path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ValueError(f"Config file {input_path} is not valid JSON: {exc}") from exc
        if not isinstance(raw, dict):
            raise ValueError(f"Config file {input_path} must hold a JSON object.")
    elif isinstance(cfg, Mapping):
        raw = dict(cfg)
    else:
        raise TypeError(f"Unsupported config type: {type(cfg).__name__}")

    file_seed = raw.pop("seed", 0)
    data_keys = DATA_KEYS.get(subcommand, ())
    data = {key: raw.pop(key) for key in data_keys if key in raw}
    return RunConfig(
        subcommand=subcommand,
        input_path=input_path,
        output_path=Path(out) if out is not None else None,
        csv_path=Path(csv) if csv is not None else None,
        seed=_validate_seed(seed if seed is not None else file_seed),
        overrides=raw,
        data=data,
    )
