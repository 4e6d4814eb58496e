"""Exception and warning types shared across the package."""


class DiskDynError(Exception):
    """Base class for all package errors."""


class DomainError(DiskDynError):
    """Input outside the mathematical domain of an operation."""


class ValidationError(DiskDynError):
    """Structurally invalid object (schema, config, wire payload)."""


class MembershipError(DiskDynError):
    """A map fails one of the model-space membership clauses."""

    def __init__(self, vertex, clause, detail=""):
        self.vertex = vertex
        self.clause = clause
        msg = f"vertex {vertex!r}: {clause}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class NumericalError(DiskDynError):
    """A solver failed to converge or produced an inconsistent count."""


class BudgetError(DiskDynError):
    """A depth or size budget would be exceeded."""


class NoInteriorFixedPoint(DiskDynError):
    """The operation requires an attracting interior fixed point and none exists."""


class TangencyWarning(UserWarning):
    """A boundary fixed point has multiplier too close to 1 to classify reliably."""
