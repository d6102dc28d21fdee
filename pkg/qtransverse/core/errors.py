"""Structured failures raised by the mathematical layers.

Precondition breaches and malformed input raise :class:`ValueError` (or
:class:`TypeError`) like the rest of the library. A
:class:`StructuredFailure` is different: the input was acceptable, but the
computation could not produce a certificate under the configured
constants and budgets. Each failure carries a JSON-serialisable
``diagnostics`` mapping so that the CLI can write it to stderr and exit
with status 1.
"""

from __future__ import annotations

from typing import Any, Dict, Mapping, Optional


class StructuredFailure(RuntimeError):
    """Base class for certificate-level failures.

    Attributes:
        kind: Short machine-readable failure name (``"budget_exhausted"``...).
        diagnostics: JSON-serialisable details (best candidate, curve, ...).
    """

    kind: str = "structured_failure"

    def __init__(self, message: str, diagnostics: Optional[Mapping[str, Any]] = None) -> None:
        super().__init__(message)
        self.diagnostics: Dict[str, Any] = dict(diagnostics or {})

    def as_dict(self) -> Dict[str, Any]:
        """Return the stderr payload emitted by the CLI."""
        return {"error": str(self), "kind": self.kind, "diagnostics": self.diagnostics}


class PerturbationBudgetExhausted(StructuredFailure):
    """No candidate perturbation was certified within the search budget."""

    kind = "budget_exhausted"


class ScheduleUnderflow(StructuredFailure):
    """The eta recursion dropped below the representable floor."""

    kind = "schedule_underflow"


class ConstantSelectionError(StructuredFailure):
    """No separation constant D satisfies the selection inequality."""

    kind = "constant_selection"


class ConstructionAborted(StructuredFailure):
    """The iterative construction stopped; diagnostics hold the partial report."""

    kind = "construction_aborted"


class NullSpaceEmpty(StructuredFailure):
    """The containment linear map has no numerical null vector."""

    kind = "null_space_empty"
