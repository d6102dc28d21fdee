"""Report assembly and emission.

A :class:`Report` wraps one module payload (certificate, estimate,
construction trace...) together with the tool version, the configuration
echo and timestamps. :func:`emit_report` writes it as pretty-printed JSON
with sorted keys and floats rendered with 17 significant digits, so that
identical inputs give byte-identical files.

Timestamps follow the reproducible-builds convention: they are taken from
``$SOURCE_DATE_EPOCH`` when it is set and are ``null`` otherwise.

CSV side outputs go through :mod:`polars`.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Union

import numpy as np
import polars as pl

from qtransverse.core.constants import REPORT_FLOAT_DIGITS

# ---------------------------------------------------------------------------
# Payload schemas
# ---------------------------------------------------------------------------

_SCHEMAS: Dict[str, Sequence[str]] = {}


def register_schema(kind: str, required: Sequence[str]) -> None:
    """Register the required top-level keys of a payload ``kind``.

    Raises:
        ValueError: If ``kind`` is already registered with different keys.
    """
    if kind in _SCHEMAS and tuple(_SCHEMAS[kind]) != tuple(required):
        raise ValueError(f"Payload kind '{kind}' is already registered.")
    _SCHEMAS[kind] = tuple(required)


def validate_payload(payload: Mapping[str, Any]) -> None:
    """Check a payload against its registered schema.

    Raises:
        ValueError: If the kind is unknown or required keys are missing.
    """
    kind = payload.get("kind")
    if kind not in _SCHEMAS:
        available = ", ".join(sorted(_SCHEMAS)) or "(none registered)"
        raise ValueError(f"Unknown payload kind '{kind}'. Available: {available}")
    missing = [key for key in _SCHEMAS[kind] if key not in payload]
    if missing:
        raise ValueError(f"Payload '{kind}' is missing required keys: {', '.join(missing)}")


register_schema("perturbation", ["w", "norm_w", "allowed_radius", "certificate", "candidates_tried"])
register_schema("wongkew", ["rows", "slopes"])
register_schema("containment", ["G", "degree_bound", "residual"])
register_schema("net", ["N", "k", "separation", "separations_verified", "covering_radius"])
register_schema("coloring", ["N", "M", "D", "k", "separations_verified"])
register_schema("construction", ["points", "colors", "final_certificate", "sup", "normalization"])
register_schema("moves", ["word", "product", "class_representative"])
register_schema("diagnostic", ["log_derivative", "weight"])


# ---------------------------------------------------------------------------
# Report
# ---------------------------------------------------------------------------


def _timestamps() -> Dict[str, Optional[int]]:
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    return {"created": int(epoch) if epoch and epoch.isdigit() else None}


@dataclass
class Report:
    """Top-level document written by every subcommand.

    Attributes:
        version: Tool version string.
        config: Echo of the resolved run configuration and defaults table.
        payload: Module payload; must carry a registered ``kind``.
        timestamps: Creation time (seconds since epoch) or ``None``.
    """

    version: str
    config: Dict[str, Any]
    payload: Dict[str, Any]
    timestamps: Dict[str, Optional[int]] = field(default_factory=_timestamps)

    def as_dict(self) -> Dict[str, Any]:
        return {
            "version": self.version,
            "config": self.config,
            "payload": self.payload,
            "timestamps": self.timestamps,
        }


# ---------------------------------------------------------------------------
# JSON rendering
# ---------------------------------------------------------------------------


def _format_float(value: float) -> str:
    if math.isnan(value) or math.isinf(value):
        # JSON has no literal for these; the string keeps the claim visible.
        return json.dumps("nan" if math.isnan(value) else ("inf" if value > 0 else "-inf"))
    text = f"{value:.{REPORT_FLOAT_DIGITS}g}"
    if not any(ch in text for ch in ".en"):
        text += ".0"
    return text


def _render(obj: Any, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, Mapping):
        if not obj:
            return "{}"
        items = [
            f"{pad}{json.dumps(str(key))}: {_render(obj[key], indent, level + 1)}"
            for key in sorted(obj, key=str)
        ]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{pad}{_render(item, indent, level + 1)}" for item in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if isinstance(obj, np.ndarray):
        return _render(obj.tolist(), indent, level)
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _format_float(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        return _render([float(obj.real), float(obj.imag)], indent, level)
    if isinstance(obj, (str, Path)):
        return json.dumps(str(obj))
    raise TypeError(f"Cannot serialise object of type {type(obj).__name__} into a report")


def dumps(obj: Any, indent: int = 2) -> str:
    """Render ``obj`` as deterministic JSON text (trailing newline included)."""
    return _render(obj, indent, 0) + "\n"


def emit_report(report: Union[Report, Mapping[str, Any]], path: Union[str, Path]) -> Path:
    """Validate and write a report.

    Args:
        report: A :class:`Report` or an already-built mapping with a
            ``payload`` entry.
        path: Destination file; parent directories are created.

    Returns:
        The written path.

    Raises:
        ValueError: If the payload does not match its schema.
        OSError: If the path is not writable.
    """
    data = report.as_dict() if isinstance(report, Report) else dict(report)
    validate_payload(data["payload"])
    out = Path(path)
    if out.parent and not out.parent.exists():
        out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(dumps(data), encoding="utf-8")
    return out


def write_csv(rows: Sequence[Mapping[str, Any]], path: Union[str, Path], columns: List[str]) -> Path:
    """Write ``rows`` as a comma-separated file with a header row."""
    frame = pl.DataFrame(
        {col: [row[col] for row in rows] for col in columns},
        schema=None if rows else {col: pl.Float64 for col in columns},
    )
    out = Path(path)
    if out.parent and not out.parent.exists():
        out.parent.mkdir(parents=True, exist_ok=True)
    frame.write_csv(out)
    return out


def summary_line(fields: Mapping[str, Any], formatter: Callable[[Any], str] = str) -> str:
    """One-line ``key=value`` summary used on stdout."""
    return " ".join(f"{key}={formatter(fields[key])}" for key in fields)
