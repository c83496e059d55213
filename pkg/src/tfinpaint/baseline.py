"""Time-domain Janssen inpainting and its gap-wise variant.

The missing samples ``x_m`` minimize ``1/2 ||A x||^2`` with the reliable
samples ``x_o`` held fixed, i.e. they solve
``(A^T A)_mm x_m = -(A^T A)_mo x_o``. Since ``A^T A`` is a band Toeplitz
matrix, the restriction to the missing indices is banded as well and is
solved with a banded Cholesky factorization.
"""

import logging

import numpy as np

from ._validation import check_mask_array, check_positive_int, check_signal
from .armodel import ar_error, ar_error_adjoint, gram_autocorrelation, lpc
from .exceptions import DegenerateSignalError, InsufficientContextError, NoReliableDataError
from .linalg import banded_cholesky, banded_solve
from .stft import affected_samples, istft

__all__ = [
    "fill_missing_ls",
    "janssen_td",
    "missing_runs",
    "gapwise_janssen",
    "default_context",
    "baseline_from_spectrogram",
]

logger = logging.getLogger(__name__)


def _missing_gram_bands(g, missing_idx):
    p = g.size - 1
    m = missing_idx.size
    width = min(p, m - 1)
    bands = np.zeros((width + 1, m))
    bands[0] = g[0]
    for k in range(1, width + 1):
        lag = missing_idx[k:] - missing_idx[:-k]
        bands[k, : m - k] = np.where(lag <= p, g[np.minimum(lag, p)], 0.0)
    return bands


def fill_missing_ls(model, x, reliable):
    """Least-squares fill of the unreliable samples under a fixed AR model.

    Parameters
    ----------
    model : ARModel
    x : array_like
        Signal; values at unreliable positions are ignored.
    reliable : array_like of bool
        True where the sample is observed.

    Returns
    -------
    ndarray
        Copy of `x` with the unreliable samples replaced by the minimizer
        of ``1/2 ||A x||^2``; reliable samples are passed through untouched.
    """
    x = check_signal(x)
    reliable = check_mask_array(reliable, x.size, "reliable")
    out = x.copy()
    missing_idx = np.flatnonzero(~reliable)
    if missing_idx.size == 0:
        return out
    if missing_idx.size == x.size:
        raise NoReliableDataError("every sample is missing")
    known = np.where(reliable, x, 0.0)
    rhs = -ar_error_adjoint(model, ar_error(model, known))[missing_idx]
    factor = banded_cholesky(_missing_gram_bands(gram_autocorrelation(model), missing_idx))
    out[missing_idx] = banded_solve(factor, rhs)
    return out


def janssen_td(x_cor, reliable, order, iters=10):
    """Alternate AR estimation and least-squares filling on one segment.

    Missing samples start from zero. Returns the final estimate.
    """
    x_cor = check_signal(x_cor)
    reliable = check_mask_array(reliable, x_cor.size, "reliable")
    order = check_positive_int(order, "order")
    iters = check_positive_int(iters, "iters")
    x = np.where(reliable, x_cor, 0.0)
    if reliable.all():
        return x_cor.copy()
    if not reliable.any():
        raise NoReliableDataError("every sample is missing")
    if not np.any(x):
        return x

    model = None
    for i in range(iters):
        try:
            model = lpc(x, order)
        except DegenerateSignalError:
            if model is None:
                raise
            logger.warning("iteration %d: degenerate estimate, keeping previous AR model", i + 1)
        x = fill_missing_ls(model, x, reliable)
        x[reliable] = x_cor[reliable]
    return x


def missing_runs(reliable):
    """Maximal runs of unreliable samples as ``(start, length)`` pairs."""
    missing = ~np.asarray(reliable, dtype=bool)
    edges = np.diff(np.concatenate(([0], missing.astype(np.int8), [0])))
    starts = np.flatnonzero(edges == 1)
    stops = np.flatnonzero(edges == -1)
    return [(int(a), int(b - a)) for a, b in zip(starts, stops)]


def default_context(order):
    """Default number of context samples on each side of a gap."""
    return max(2 * order, 4096)


def gapwise_janssen(x_cor, reliable, order, iters=10, context=None):
    """Run :func:`janssen_td` separately on a window around each gap.

    Each maximal run of missing samples is processed on
    ``[start - context, stop + context)`` clipped to the signal. Other gaps
    falling inside that window are treated as missing too, but only the
    samples of the current run are written back.

    Raises
    ------
    InsufficientContextError
        If `context` does not exceed the order, or a window holds no more
        than `order` reliable samples.
    """
    x_cor = check_signal(x_cor)
    reliable = check_mask_array(reliable, x_cor.size, "reliable")
    order = check_positive_int(order, "order")
    context = default_context(order) if context is None else check_positive_int(context, "context")
    if context <= order:
        raise InsufficientContextError(f"context {context} must exceed the model order {order}")
    out = np.where(reliable, x_cor, 0.0)
    n = x_cor.size
    for start, length in missing_runs(reliable):
        lo = max(0, start - context)
        hi = min(n, start + length + context)
        if np.count_nonzero(reliable[lo:hi]) <= order:
            raise InsufficientContextError(
                f"gap at sample {start} has too little reliable context for order {order}"
            )
        local = janssen_td(x_cor[lo:hi], reliable[lo:hi], order, iters)
        out[start : start + length] = local[start - lo : start - lo + length]
    return out


def baseline_from_spectrogram(observed, mask, order, iters=10, context=None):
    """Gap-wise time-domain inpainting of a spectrogram with missing columns.

    The observation is synthesized back to the time domain, every sample
    under the footprint of a missing column is discarded, and the resulting
    time-domain gaps are filled by :func:`gapwise_janssen`.

    Returns
    -------
    x : ndarray
        Reconstruction of the original length.
    reliable : ndarray of bool
        The time-domain mask that was used.
    """
    length = observed.length if observed.length is not None else observed.padded_length
    coeffs = observed.coeffs * mask.reliable_columns()[None, :]
    x_cor = istft(observed.with_coeffs(coeffs), length)
    reliable = affected_samples(mask, observed.params, length)
    x_cor = np.where(reliable, x_cor, 0.0)
    if reliable.all():
        return x_cor, reliable
    return gapwise_janssen(x_cor, reliable, order, iters, context), reliable
