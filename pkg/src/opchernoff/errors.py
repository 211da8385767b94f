"""Exception hierarchy."""
from __future__ import annotations


class OpChernoffError(Exception):
    """Base class for all package errors."""


class NonConvergent(OpChernoffError):
    """Adaptive quadrature exhausted its budget above the error target."""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class Diverged(OpChernoffError):
    """An integral grows without bound (its truncations do not settle)."""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class ZeroMass(OpChernoffError):
    """Pr[Z > 0] is too small to condition on."""


class DenominatorZero(OpChernoffError):
    """The shift function vanishes at x + z."""


class MissingDerivativeOracle(OpChernoffError):
    """A series operation needs derivatives the shift function lacks."""


class NoFiniteValue(OpChernoffError):
    """The objective is +inf on the whole seed grid."""


class NonPositiveEntry(OpChernoffError, ValueError):
    pass


class LengthMismatch(OpChernoffError, ValueError):
    pass


class SpecError(OpChernoffError, ValueError):
    """A distribution or shift-function spec string failed to parse."""
