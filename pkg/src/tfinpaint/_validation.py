"""Input validation helpers shared by the functional API and the estimators."""

import numbers

import numpy as np

from .exceptions import InvalidParameterError


def check_signal(x, name="x", allow_empty=False):
    """Return `x` as a finite 1-D float64 array (copy only when needed)."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1:
        raise InvalidParameterError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size == 0 and not allow_empty:
        raise InvalidParameterError(f"{name} must contain at least one sample")
    if not np.all(np.isfinite(arr)):
        raise InvalidParameterError(f"{name} contains NaN or infinite values")
    return arr


def check_positive_int(value, name, minimum=1):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise InvalidParameterError(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise InvalidParameterError(f"{name} must be >= {minimum}, got {value}")
    return int(value)


def check_positive_float(value, name):
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise InvalidParameterError(f"{name} must be a real number, got {value!r}")
    value = float(value)
    if not np.isfinite(value) or value <= 0:
        raise InvalidParameterError(f"{name} must be positive and finite, got {value}")
    return value


def check_mask_array(mask, n, name="mask"):
    """Return a boolean reliability mask of length `n`."""
    arr = np.asarray(mask)
    if arr.shape != (n,):
        raise InvalidParameterError(f"{name} must have shape ({n},), got {arr.shape}")
    return arr.astype(bool, copy=False)
