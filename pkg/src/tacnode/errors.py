"""Exception types shared by all modules."""


class InvalidParameterError(ValueError):
    """An input lies outside the domain of an operation."""


class AccuracyError(RuntimeError):
    """Quadrature refinement failed to reach the requested tolerance.

    Attributes
    ----------
    value : complex
        Last computed value.
    estimate : float
        Last error estimate.
    """

    def __init__(self, message, value=None, estimate=None):
        super().__init__(message)
        self.value = value
        self.estimate = estimate


class UnsupportedSizeError(ValueError):
    """The requested size exceeds what the direct method supports."""


class ExcludedSectorError(ValueError):
    """The (tau1, tau2) pair lies in the sector tau2 < 0 < tau1 where no limit exists."""


class RegionError(ValueError):
    """Inputs violate the validity region of an asymptotic statement."""


class PoleProximityError(ValueError):
    """Evaluation point is too close to a pole."""
