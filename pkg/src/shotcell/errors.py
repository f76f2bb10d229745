"""Exception hierarchy shared across the package.

Every failure mode that callers (library or CLI) are expected to branch on
gets its own class; the CLI maps each to a distinct exit code.
"""

__all__ = [
    "ShotcellError",
    "DomainError",
    "StabilityError",
    "SchemaError",
    "SamplingError",
    "NumericsError",
    "CampaignError",
]


class ShotcellError(Exception):
    """Base class for all package errors."""


class DomainError(ShotcellError, ValueError):
    """An argument is outside the mathematical domain of an operation."""


class StabilityError(ShotcellError, ValueError):
    """The base-station density fails the finite-interference conditions.

    A radial density lambda(r) with path-loss exponent eps supports a
    well-defined strongest-server ratio only when the near-origin mass is
    finite and the eps-weighted far tail converges.
    """


class SchemaError(ShotcellError, ValueError):
    """A serialized system description violates the documented schema."""


class SamplingError(ShotcellError, RuntimeError):
    """Point-field sampling failed (envelope exceeded, no valid draw, ...)."""


class NumericsError(ShotcellError, ArithmeticError):
    """A numerical routine failed to converge to its target accuracy.

    Carries whatever partial value was reached plus diagnostics, so callers
    can inspect how far the computation got.
    """

    def __init__(self, message, partial=None, diagnostics=None):
        super().__init__(message)
        self.partial = partial
        self.diagnostics = dict(diagnostics or {})


class CampaignError(ShotcellError, RuntimeError):
    """A simulation campaign produced too many failed trials to trust."""
