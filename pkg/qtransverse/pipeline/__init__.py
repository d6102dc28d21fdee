"""The flat-model construction: peak sections, schedule, per-color loop and checks."""

from .construct import (
    CONSTRUCTION_COLUMNS,
    ColorRecord,
    ConstructionParams,
    ConstructionReport,
    PointRecord,
    donaldson_construct,
    influence_radius,
)
from .diagnostics import LogDerivativeDiagnostic, log_derivative_diagnostic, log_derivative_trend
from .flat import (
    FLAT_MODEL_FACTS,
    FlatModel,
    PeakCombination,
    PeakSection,
    chart_frame,
    peak_section_eval,
)
from .schedule import Schedule, eta_schedule, key_inequality, select_constants
from .verify import GlobalVerification, sup_on_sublevel, verify_global
from .weight import WeightValue, complete_weight_g

__all__ = [
    "CONSTRUCTION_COLUMNS",
    "ColorRecord",
    "ConstructionParams",
    "ConstructionReport",
    "PointRecord",
    "donaldson_construct",
    "influence_radius",
    "LogDerivativeDiagnostic",
    "log_derivative_diagnostic",
    "log_derivative_trend",
    "FLAT_MODEL_FACTS",
    "FlatModel",
    "PeakCombination",
    "PeakSection",
    "chart_frame",
    "peak_section_eval",
    "Schedule",
    "eta_schedule",
    "key_inequality",
    "select_constants",
    "GlobalVerification",
    "sup_on_sublevel",
    "verify_global",
    "WeightValue",
    "complete_weight_g",
]
