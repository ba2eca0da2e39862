"""Exceptions raised by the polymer endpoint library."""

from __future__ import annotations


class PolymerEndpointError(Exception):
    """Base class for library errors."""


class ConfigurationError(PolymerEndpointError, ValueError):
    """Parameters, grid specs or budgets outside their valid ranges."""


class NumericalDomainError(PolymerEndpointError, ArithmeticError):
    """A computed quantity is non-finite or outside its mathematical range."""

    def __init__(
        self,
        message: str,
        *,
        entry: str | None = None,
        x: float | None = None,
        y: float | None = None,
    ) -> None:
        """Initialize with the offending entry and coordinates, when known."""
        super().__init__(message)
        self.entry = entry
        self.x = x
        self.y = y

    def __str__(self) -> str:
        """Message with location details."""
        base = super().__str__()
        parts = []
        if self.entry is not None:
            parts.append(f"entry={self.entry}")
        if self.x is not None:
            parts.append(f"x={self.x!r}")
        if self.y is not None:
            parts.append(f"y={self.y!r}")
        if not parts:
            return base
        return f"{base} ({', '.join(parts)})"


class SingularOperatorError(NumericalDomainError):
    """I - K is numerically singular on the quadrature grid."""


class BelowResolutionError(NumericalDomainError):
    """A probability fell below what double precision resolves."""


class CalibrationError(PolymerEndpointError):
    """Scale calibration impossible (for instance a zero-variance sample)."""


class FitError(PolymerEndpointError):
    """Least-squares fit with a degenerate design."""
