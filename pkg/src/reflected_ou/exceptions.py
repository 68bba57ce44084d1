"""Exception hierarchy shared by the simulation, estimation and CLI layers."""


class ReflectedOUError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(ReflectedOUError, ValueError):
    """Raised when an argument is out of its domain (non-finite, negative, ...)."""


class UnsupportedCombinationError(InvalidInputError):
    """Raised when individually valid options cannot be used together."""


class DegeneratePathError(ReflectedOUError, ArithmeticError):
    """Raised when an estimator denominator vanishes (e.g. an all-zero path)."""


class MissingDataError(ReflectedOUError):
    """Raised when a path lacks a field an operation needs (e.g. Brownian increments)."""


class ReplicationError(DegeneratePathError):
    """A degenerate-path failure inside a Monte Carlo run, tagged with its replication."""

    def __init__(self, replication, cause):
        self.replication = replication
        self.cause = cause
        super().__init__(f"replication {replication}: {cause}")
