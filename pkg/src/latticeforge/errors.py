"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: domain/range errors -> 2,
invariant violations -> 3, exhausted budgets -> 4.
"""

from __future__ import annotations


class LatticeForgeError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(LatticeForgeError, ValueError):
    """An argument lies outside the domain of the operation."""


class OutOfRangeError(DomainError):
    """A numeric parameter is outside the range the construction supports."""


class UnsupportedDimensionError(DomainError):
    """The operation is not implemented for this dimension."""


class BudgetExceededError(LatticeForgeError, RuntimeError):
    """A lattice-point or subset budget would be exceeded."""

    def __init__(self, message: str, count: int | None = None):
        super().__init__(message)
        self.count = count


class InvariantViolation(LatticeForgeError, RuntimeError):
    """An exact verification failed. Carries the offending instance."""

    def __init__(self, message: str, instance=None):
        super().__init__(message)
        self.instance = instance


class TheoremViolation(InvariantViolation):
    """An enumerated value contradicts a claimed gap or witness volume."""
