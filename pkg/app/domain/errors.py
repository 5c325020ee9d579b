from __future__ import annotations


class QDotError(Exception):
    """Base class for every error raised by the toolkit."""


class StateValidationError(QDotError, ValueError):
    """A candidate density matrix violates the X-state invariants."""


class TraceError(StateValidationError):
    pass


class NegativeDiagonal(StateValidationError):
    pass


class BlockNotPSD(StateValidationError):
    pass


class DomainError(QDotError, ValueError):
    """An argument lies outside the domain of a function (e.g. a probability outside [0, 1])."""


class BasisNotOrthonormal(QDotError, ValueError):
    pass


class TemperatureTooSmall(QDotError, ValueError):
    """Positive temperature below the Boltzmann-weight cutoff; use the ground-state path instead."""


class NumericalFailure(QDotError, ArithmeticError):
    pass


class NoConvergence(NumericalFailure):
    pass


class EmptySweep(QDotError, ValueError):
    pass


class SweepPointError(QDotError):
    """A single grid point of a sweep failed. Carries the offending parameter value."""

    def __init__(self, parameter: str, value: float, reason: str) -> None:
        super().__init__(f"Sweep aborted at {parameter}={value!r}: {reason}")
        self.parameter = parameter
        self.value = value
        self.reason = reason

    def __reduce__(self):
        # Rebuilt from the constructor arguments when crossing a process boundary.
        return type(self), (self.parameter, self.value, self.reason)
