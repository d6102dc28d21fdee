"""Configuration: the bundled defaults table and per-run configuration."""

from .defaults import defaults_version, load_defaults, section
from .run_config import (
    DATA_KEYS,
    SUBCOMMAND_SECTIONS,
    RunConfig,
    load_config,
    merge_overrides,
)

__all__ = [
    "defaults_version",
    "load_defaults",
    "section",
    "DATA_KEYS",
    "SUBCOMMAND_SECTIONS",
    "RunConfig",
    "load_config",
    "merge_overrides",
]
