"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class GreensError(Exception):
    """Base class for every error raised by this package."""


class DomainError(GreensError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class UnsupportedGridError(GreensError, ValueError):
    """Grid parameters request a grid variant this package does not support."""


class SupercriticalChargeError(DomainError):
    """alpha*|Z0| >= |kappa| on some interval: s would be imaginary."""


class EnergyRangeError(DomainError):
    """Energy violates a precondition (slope bound or q-reality window)."""


class MatchingError(GreensError):
    """The 2x2 continuity system at an interval boundary was singular."""


class NearPoleError(GreensError):
    """Requested energy is too close to a bound eigenvalue of the potential."""


class AccuracyError(GreensError):
    """A computed quantity failed its internal accuracy check."""


class OverflowRangeError(GreensError, OverflowError):
    """A special-function value exceeds double range; carries the exponent."""

    def __init__(self, message: str, log_magnitude: float):
        super().__init__(message)
        self.log_magnitude = log_magnitude


class StateNotFoundError(GreensError):
    """The bound-state search could not bracket the requested level."""


class PotentialLoadError(GreensError, ValueError):
    """A tabulated charge violates a boundary or monotonicity condition."""


class FileFormatError(GreensError, ValueError):
    """An on-disk file does not conform to its documented format."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
