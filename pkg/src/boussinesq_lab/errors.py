"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid configuration, grid size, or parse failure."""


class UnsupportedDomainError(ValueError):
    """Operation requested on a grid it is not defined for."""


class StepSizeError(ValueError):
    """Time step exceeds the CFL cap."""


class AssumptionError(ValueError):
    """Input data violates a hypothesis of the check being run."""


class BlowupError(FloatingPointError):
    """Non-finite values appeared during time integration."""

    def __init__(self, t, message="non-finite tendency"):
        super().__init__(f"{message} at t={t:.6g}")
        self.t = t


class DegenerateTracerWarning(UserWarning):
    """A tracer came within tolerance of a segment endpoint."""
