"""Shared infrastructure: failures, constants, grids and report emission."""

from . import constants, grids
from .errors import (
    ConstantSelectionError,
    ConstructionAborted,
    NullSpaceEmpty,
    PerturbationBudgetExhausted,
    ScheduleUnderflow,
    StructuredFailure,
)
from .report import Report, dumps, emit_report, validate_payload, write_csv

__all__ = [
    "constants",
    "grids",
    "StructuredFailure",
    "PerturbationBudgetExhausted",
    "ScheduleUnderflow",
    "ConstantSelectionError",
    "ConstructionAborted",
    "NullSpaceEmpty",
    "Report",
    "dumps",
    "emit_report",
    "validate_payload",
    "write_csv",
]
