"""Autoregressive modelling: LPC estimation and the error operator it defines.

A model of order ``p`` is the prediction-error filter
``a = [1, a_2, ..., a_{p+1}]``; the error of a signal ``x`` under the model is
the full linear convolution ``e = a * x`` (length ``N + p``), written
``e = A x`` with ``A`` the ``(N + p) x N`` Toeplitz convolution matrix.
"""

from dataclasses import dataclass

import numpy as np

from ._validation import check_positive_float, check_positive_int, check_signal
from .exceptions import DegenerateSignalError, InvalidParameterError

__all__ = [
    "ARModel",
    "BandedSpdMatrix",
    "autocorrelation",
    "levinson",
    "lpc",
    "ar_error",
    "ar_error_adjoint",
    "gram_autocorrelation",
    "gram_plus_identity",
]

# relative floor on the prediction-error power before the recursion stops
_VARIANCE_FLOOR = 1e-14


@dataclass(frozen=True, eq=False)
class ARModel:
    """Prediction-error filter with its innovation variance."""

    coeffs: np.ndarray
    error_variance: float = 0.0

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=np.float64)
        if coeffs.ndim != 1 or coeffs.size < 1 or coeffs[0] != 1.0:
            raise InvalidParameterError("AR coefficients must be a 1-D vector starting with 1")
        if not np.all(np.isfinite(coeffs)):
            raise InvalidParameterError("AR coefficients must be finite")
        if self.error_variance < 0:
            raise InvalidParameterError("error variance must be nonnegative")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def order(self):
        return self.coeffs.size - 1

    @classmethod
    def identity(cls, order=0):
        coeffs = np.zeros(order + 1)
        coeffs[0] = 1.0
        return cls(coeffs, 0.0)


def autocorrelation(x, max_lag):
    """Biased autocorrelation ``r_k = (1/N) sum_n x_n x_{n+k}`` for ``k = 0..max_lag``."""
    x = check_signal(x)
    max_lag = check_positive_int(max_lag, "max_lag", minimum=0)
    n = x.size
    if max_lag >= n:
        raise InvalidParameterError(f"order {max_lag} must be smaller than the signal length {n}")
    if n * (max_lag + 1) <= 1 << 16:
        r = np.array([x[: n - k] @ x[k:] for k in range(max_lag + 1)])
    else:
        nfft = 1 << int(np.ceil(np.log2(n + max_lag + 1)))
        spec = np.fft.rfft(x, nfft)
        r = np.fft.irfft(spec.real**2 + spec.imag**2, nfft)[: max_lag + 1]
    return r / n


def levinson(r):
    """Solve the Yule-Walker equations by the Levinson-Durbin recursion.

    Parameters
    ----------
    r : array_like
        Autocorrelation sequence ``r[0..p]``.

    Returns
    -------
    ARModel
        Order-``p`` model. If the prediction-error power collapses below
        ``1e-14 * r[0]`` the recursion stops and the remaining coefficients
        are zero.
    """
    r = np.asarray(r, dtype=np.float64)
    if r.ndim != 1 or r.size < 1:
        raise InvalidParameterError("autocorrelation must be a nonempty 1-D vector")
    if not r[0] > 0:
        raise DegenerateSignalError("zero-lag autocorrelation must be positive")
    p = r.size - 1
    a = np.zeros(p + 1)
    a[0] = 1.0
    err = r[0]
    floor = _VARIANCE_FLOOR * r[0]
    for m in range(1, p + 1):
        k = -(a[:m] @ r[m:0:-1]) / err
        new_err = err * (1.0 - k * k)
        if new_err <= floor:
            break
        a[1 : m + 1] = a[1 : m + 1] + k * a[m - 1 :: -1][:m]
        err = new_err
    return ARModel(a, float(err))


def lpc(x, order):
    """Estimate an AR model of the given order by the autocorrelation method."""
    return levinson(autocorrelation(x, order))


def ar_error(model, x):
    """Prediction error ``A x`` as the full convolution of the model with `x`."""
    return np.convolve(np.asarray(x, dtype=np.float64), model.coeffs)


def ar_error_adjoint(model, e):
    """Apply ``A^T`` to a vector of length ``N + p``."""
    e = np.asarray(e, dtype=np.float64)
    return np.correlate(e, model.coeffs, mode="valid")


def gram_autocorrelation(model):
    """Entries ``g_k = sum_i a_i a_{i+k}`` of the Toeplitz matrix ``A^T A``."""
    a = model.coeffs
    return np.correlate(a, a, mode="full")[a.size - 1 :]


@dataclass(frozen=True, eq=False)
class BandedSpdMatrix:
    """Symmetric band matrix in lower storage.

    ``bands[k, j]`` holds the entry ``(j + k, j)``; entries past the end of
    the matrix are padding and ignored.
    """

    bands: np.ndarray

    @property
    def dimension(self):
        return self.bands.shape[1]

    @property
    def bandwidth(self):
        return self.bands.shape[0] - 1

    def to_dense(self):
        n = self.dimension
        out = np.zeros((n, n))
        for k in range(min(self.bandwidth + 1, n)):
            d = self.bands[k, : n - k]
            out[np.arange(k, n), np.arange(n - k)] = d
            out[np.arange(n - k), np.arange(k, n)] = d
        return out

    def matvec(self, v):
        v = np.asarray(v, dtype=np.float64)
        n = self.dimension
        out = self.bands[0] * v
        for k in range(1, min(self.bandwidth + 1, n)):
            d = self.bands[k, : n - k]
            out[k:] += d * v[: n - k]
            out[: n - k] += d * v[k:]
        return out


def gram_plus_identity(model, n, rho):
    """Banded representation of ``I + (1/rho) A^T A`` for signals of length `n`."""
    rho = check_positive_float(rho, "rho")
    n = check_positive_int(n, "n")
    if n <= model.order:
        raise InvalidParameterError(f"dimension {n} must exceed the model order {model.order}")
    g = gram_autocorrelation(model) / rho
    g[0] += 1.0
    bands = np.repeat(g[:, None], n, axis=1)
    return BandedSpdMatrix(bands)
