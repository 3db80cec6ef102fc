"""Exception types shared across the solver modules."""


class MechanosimError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(MechanosimError):
    """Invalid or unparsable experiment configuration."""


class PositivityLoss(MechanosimError):
    """The explicit update would produce a nonpositive cell average."""

    def __init__(self, cell: int, message: str | None = None):
        self.cell = cell
        super().__init__(message or f"positivity lost in cell {cell}")


class FitWindowTooShort(MechanosimError):
    """The perturbation left the linear regime before enough samples accrued."""


class NoFinitePeriod(MechanosimError):
    """No finite second root of the first integral; concentration regime."""


class NotSteady(MechanosimError):
    """The finite-volume state has not reached the steadiness threshold."""


class InsufficientSamples(MechanosimError):
    """Too few samples for a least-squares rate fit."""


class InconclusiveProbe(MechanosimError):
    """Numeric limit probe for a custom law is non-monotone."""
