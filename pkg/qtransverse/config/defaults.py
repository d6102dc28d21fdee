"""Bundled defaults table.

The table lives in :file:`defaults.yaml`, resolved via
:func:`importlib.resources` so it works the same whether the package is
installed from a wheel, an sdist, or ``pip install -e .``. Sections are
keyed by library area (``perturbation``, ``pipeline``...); the CLI maps each
subcommand onto one section.
"""

from __future__ import annotations

import copy
import functools
from importlib import resources
from typing import Any, Dict, Mapping

import yaml

#: Package-qualified path to the bundled defaults file.
DEFAULTS_PACKAGE_RESOURCE = "qtransverse.config"
_DEFAULTS_FILENAME = "defaults.yaml"

#: Sections every defaults table must provide.
REQUIRED_SECTIONS = ("polycore", "levi", "perturbation", "algvar", "nets", "pipeline", "diag")


@functools.lru_cache(maxsize=1)
def _read_defaults_file() -> Mapping[str, Any]:
    """Read the bundled :file:`defaults.yaml`.

    Raises:
        FileNotFoundError: If the YAML file is missing from the package.
        ValueError: If the YAML payload is malformed.
    """
    resource = resources.files(DEFAULTS_PACKAGE_RESOURCE).joinpath(_DEFAULTS_FILENAME)
    if not resource.is_file():
        raise FileNotFoundError(
            f"Defaults file {_DEFAULTS_FILENAME} not found in package "
            f"{DEFAULTS_PACKAGE_RESOURCE}. This usually means the package "
            "was built without package_data; reinstall from a wheel or "
            "run `pip install -e .` from a checkout."
        )
    with resources.as_file(resource) as path:
        with open(path, encoding="utf-8") as fh:
            data = yaml.safe_load(fh)
    if not isinstance(data, dict):
        raise ValueError(f"{_DEFAULTS_FILENAME} did not parse to a mapping.")
    if not isinstance(data.get("version"), int):
        raise ValueError(f"{_DEFAULTS_FILENAME} is missing an integer 'version'.")
    missing = [name for name in REQUIRED_SECTIONS if not isinstance(data.get(name), dict)]
    if missing:
        raise ValueError(f"{_DEFAULTS_FILENAME} is missing sections: {', '.join(missing)}")
    return data


def load_defaults() -> Dict[str, Any]:
    """Return a deep copy of the full defaults table (safe to mutate)."""
    return copy.deepcopy(dict(_read_defaults_file()))


def defaults_version() -> int:
    """Version number of the bundled table."""
    return int(_read_defaults_file()["version"])


def section(name: str) -> Dict[str, Any]:
    """Return a copy of one section of the defaults table.

    Raises:
        ValueError: If ``name`` is not a section. The error lists the
            available sections.
    """
    table = _read_defaults_file()
    if name == "version" or name not in table:
        available = ", ".join(sorted(k for k in table if k != "version"))
        raise ValueError(f"Unknown defaults section '{name}'. Available sections: {available}")
    return copy.deepcopy(dict(table[name]))
