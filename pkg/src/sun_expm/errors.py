"""Exception hierarchy for sun-expm operations."""

from typing import Optional


class SunExpmError(Exception):
    """Base class for every error raised by sun-expm."""


class InvalidInputError(SunExpmError, ValueError):
    """Input has the wrong shape, range, or structure."""


class UnsupportedOrderError(InvalidInputError):
    """Order or dimension lies outside the range of a closed form."""


class InconsistentInvariantsError(InvalidInputError):
    """No real spectrum (or angle set) realizes the given invariants."""


class DegenerateSpectrumError(SunExpmError, ValueError):
    """A residue formula was asked for inside a degenerate eigenvalue cluster."""


class NumericalFailureError(SunExpmError, ArithmeticError):
    """An iteration failed to converge or two evaluations disagreed.

    Attributes:
        diagnostic: The offending norm, residual or disagreement
    """

    def __init__(self, message: str, diagnostic: Optional[float] = None):
        super().__init__(message)
        self.diagnostic = diagnostic


class PoleProximityError(NumericalFailureError):
    """The resolvent was evaluated too close to a pole of det(I - sM)."""
