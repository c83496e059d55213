"""Exception types raised across the package."""


class InvalidParameterError(ValueError):
    """A configuration value is outside its admissible range."""


class NonTileableWindowError(ValueError):
    """The squared window does not overlap-add to a constant at the given hop."""


class InconsistentMaskError(ValueError):
    """A mask, plan or coefficient array disagrees with the data it is applied to."""


class DegenerateSignalError(ValueError):
    """The signal carries no energy, so no AR model can be estimated from it."""


class NotPositiveDefiniteError(ValueError):
    """A banded factorization met a non-positive pivot."""


class NoReliableDataError(ValueError):
    """Nothing is observed, so the inpainting problem has no anchor."""


class InsufficientContextError(ValueError):
    """The reliable neighbourhood of a gap is too short for the model order."""


class CannotPlaceGapsError(ValueError):
    """The requested gaps do not fit into the spectrogram under the constraints."""


class UndefinedReferenceError(ValueError):
    """The reference signal of a metric has zero energy."""


class InsufficientDataError(ValueError):
    """Too few values to compute the requested statistic."""


class UnsupportedFormatError(ValueError):
    """The audio file cannot be decoded by this package."""
