"""Exception types shared across the package."""


class DtforgeError(Exception):
    """Base class for all package errors."""


class GridError(DtforgeError):
    """Invalid grid construction or mismatched grids in an operation."""


class PeriodicMeanError(DtforgeError):
    """Periodic antiderivative requested for a field with nonzero mean."""


class SingularDenominatorError(DtforgeError):
    """A transformation denominator came too close to zero."""


class EigenMismatchError(DtforgeError):
    """An eigenpotential failed its residual check against the given state."""


class MaterializationError(DtforgeError):
    """A catalogued seed could not be realized on the requested grid."""


class BlowupError(DtforgeError):
    """Time integration produced non-finite values."""

    def __init__(self, step: int, time: float):
        self.step = step
        self.time = time
        super().__init__(f"non-finite state at step {step} (t={time:.6g})")


class ConfigError(DtforgeError):
    """Invalid run configuration."""
