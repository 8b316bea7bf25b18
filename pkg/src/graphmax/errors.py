"""Exception hierarchy shared by all graphmax modules."""

from __future__ import annotations


class GraphmaxError(Exception):
    """Base class for every error raised by this package."""


class InvalidParameterError(GraphmaxError, ValueError):
    """A numeric or structural argument is outside its admissible range."""


class GraphValidationError(InvalidParameterError):
    """An edge list does not describe a simple connected graph."""


class SelfLoopError(GraphValidationError):
    pass


class DuplicateEdgeError(GraphValidationError):
    pass


class DisconnectedGraphError(GraphValidationError):
    pass


class BudgetExceededError(GraphmaxError):
    """A requested computation is larger than the configured budget."""


class DivergenceError(InvalidParameterError):
    """A series or variation does not converge for the given exponent."""


class InvariantViolation(GraphmaxError, AssertionError):
    """A proven inequality failed numerically; indicates a bug upstream."""
