"""Exception hierarchy for thermoforce."""

from typing import Optional


class ThermoforceError(Exception):
    """Base class for all errors raised by thermoforce."""


class DomainError(ThermoforceError, ValueError):
    """An argument lies outside the domain where an operation is defined."""


class PassivityError(DomainError):
    """The coupled inductor pair is not passive (|M| >= L, m^2 >= 1)."""


class ModelValidityError(ThermoforceError):
    """Inputs fall outside the regime where the physical model applies."""


class NotApplicableError(ThermoforceError):
    """The requested quantity is not defined for the given model."""


class StabilityError(ThermoforceError):
    """A simulation time step is too large to be trusted."""


class EvaluationError(ThermoforceError):
    """A function returned a non-finite value."""

    def __init__(self, message: str, abscissa: Optional[float] = None) -> None:
        """
        Initialize the error.

        Args:
            message: Human readable description
            abscissa: The point at which the bad sample was taken
        """
        if abscissa is not None:
            message = f"{message} (at x={abscissa!r})"
        super().__init__(message)
        self.abscissa = abscissa


class ConvergenceError(ThermoforceError):
    """A numerical result was required to converge but did not."""


class ConfigError(ThermoforceError):
    """A run configuration file is missing, unreadable or fails validation."""
