"""Exception hierarchy.

Validation-class errors map to CLI exit code 2, infeasibility-class errors
to exit code 3.
"""


class SolarWeedError(Exception):
    """Base class for all package errors."""


class ValidationError(SolarWeedError, ValueError):
    """An input violates a domain invariant."""


class InfeasibleError(SolarWeedError):
    """The inputs are valid but no plan can satisfy them."""


class ArgumentBelowNegativeOne(ValidationError):
    """The window arccos argument is below -1 (outside the model's validity)."""


class DayOutOfRange(ValidationError):
    pass


class ZeroFlux(ValidationError):
    """Treatment requested with no delivered irradiance."""


class Untreatable(SolarWeedError):
    """Required dwell exceeds the configured cap at this instant."""

    def __init__(self, dwell_s: float, max_dwell_s: float):
        self.dwell_s = dwell_s
        self.max_dwell_s = max_dwell_s
        super().__init__(f"required dwell {dwell_s:.3f} s exceeds cap {max_dwell_s:.3f} s")


class MappingDoesNotFit(InfeasibleError):
    pass


class NoWindow(InfeasibleError):
    """Every day in the horizon has an empty solar window."""
