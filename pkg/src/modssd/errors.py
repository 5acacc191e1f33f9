"""Exception types raised by the numeric routines."""


class ModssdError(Exception):
    """Base class for all package errors."""


class DomainError(ModssdError, ValueError):
    """An argument is outside the mathematical domain of an operation."""


class ConvergenceError(ModssdError):
    """A series or iteration cannot converge for the given parameters."""


class BudgetError(ModssdError):
    """A truncation or grid-size budget would be exceeded."""


class AccuracyError(ModssdError):
    """Adaptive refinement stopped before reaching the requested tolerance."""


class DegenerateStateError(ModssdError):
    """A state has numerically vanishing norm and cannot be normalized."""


class AliasingError(ModssdError):
    """A grid is too coarse to represent the requested phase factor."""


class FormulaInconsistencyError(ModssdError):
    """A closed-form expression produced an internally inconsistent result."""


class SchemaError(ModssdError):
    """A data file does not have the expected columns or layout."""
