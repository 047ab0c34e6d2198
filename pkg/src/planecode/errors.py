"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: assertion failures -> 1,
infeasibility / guards -> 2, malformed input -> 3.
"""


class PlanecodeError(Exception):
    """Base class for all package errors."""


class MalformedInput(PlanecodeError, ValueError):
    """Input data violates a structural precondition (bad file, bad indices)."""


class NotAPlane(PlanecodeError, ValueError):
    """An incidence system failed projective-plane validation."""

    def __init__(self, report):
        super().__init__(f"not a projective plane: {report}")
        self.report = report


class Infeasible(PlanecodeError):
    """A computation was refused because it exceeds a configured budget."""

    def __init__(self, message, required=None):
        super().__init__(message)
        self.required = required


class BudgetExceeded(Infeasible):
    """A search ran past its node or point budget."""


class VerificationError(PlanecodeError, AssertionError):
    """An internal consistency check failed (e.g. inexact division)."""
