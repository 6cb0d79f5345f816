"""Exception hierarchy. CLI exit codes are keyed off these classes."""


class CyclePhaseError(Exception):
    """Base class for all package errors."""

    exit_code = 2


class DataError(CyclePhaseError, ValueError):
    """Malformed, missing or insufficient input data."""

    exit_code = 2


class NumericalError(CyclePhaseError, ArithmeticError):
    """A numerical procedure produced an unusable result (e.g. unstable filter)."""

    exit_code = 3
