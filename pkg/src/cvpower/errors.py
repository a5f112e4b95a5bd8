"""Exception and warning taxonomy shared across the package."""


class CvPowerError(Exception):
    """Base class for all package-specific errors."""


class DegenerateInputError(CvPowerError, ValueError):
    """Input is formally valid but makes the requested quantity undefined."""


class ShapeError(CvPowerError, ValueError):
    """Array dimensions are inconsistent with each other or with a model."""


class InvalidTrainingSetError(CvPowerError, ValueError):
    """Training data cannot produce a classifier (e.g. a single class)."""


class InfeasibleSplitError(CvPowerError, ValueError):
    """Requested split would leave a partition without samples of a class."""


class SelectionError(CvPowerError, RuntimeError):
    """Forward selection aborted; carries the step where the cost failed."""


class FitFailureError(CvPowerError, RuntimeError):
    """Curve fit did not produce a usable result."""

    def __init__(self, message, best_residual=None):
        super().__init__(message)
        self.best_residual = best_residual


class NoCrossingError(CvPowerError, RuntimeError):
    """Fitted bound curves do not intersect over the evaluated range."""


class GridRangeError(CvPowerError, ValueError):
    """Query lies outside a lookup grid; extrapolation is not performed."""


class TargetUnreachableError(CvPowerError, ValueError):
    """Confidence target exceeds what the grid attains at its largest n."""

    def __init__(self, message, max_achievable=None):
        super().__init__(message)
        self.max_achievable = max_achievable


class ConfigError(CvPowerError, ValueError):
    """Campaign configuration file is invalid; message is line-anchored."""


class UserDataError(CvPowerError, ValueError):
    """User-supplied CSV dataset cannot be parsed or is unusable."""


class ExtrapolationWarning(UserWarning):
    """Calculator evaluated outside the range its coefficients were fit on."""


class DegenerateFitWarning(UserWarning):
    """Fit succeeded but the data do not constrain the model's shape."""
