"""scikit-learn style wrappers around the functional API.

The estimators expose ``get_params``/``set_params`` so they can be cloned
and grid-searched. Inpainting is transductive: ``fit`` solves the problem
for the given observation and stores the reconstruction, ``transform``
solves it for whatever observation it receives.
"""

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_mask_array, check_signal
from .armodel import ar_error, lpc
from .baseline import baseline_from_spectrogram, gapwise_janssen
from .solver import AdmmConfig, janssen_tf
from .stft import Spectrogram, StftParams, TFMask, istft, stft

__all__ = [
    "StftTransformer",
    "LinearPredictor",
    "JanssenTFInpainter",
    "GapwiseJanssenInpainter",
]


class StftTransformer(TransformerMixin, BaseEstimator):
    """Tight-frame STFT as a stateless transformer."""

    def __init__(self, win_len=2048, hop=512, n_channels=2048, frame_offset=0):
        self.win_len = win_len
        self.hop = hop
        self.n_channels = n_channels
        self.frame_offset = frame_offset

    def _params(self):
        return StftParams(self.win_len, self.hop, self.n_channels, "hann", self.frame_offset)

    def fit(self, X, y=None):
        self.params_ = self._params()
        return self

    def transform(self, X):
        return stft(check_signal(X), self._params())

    def inverse_transform(self, X):
        return istft(X, X.length)


class LinearPredictor(BaseEstimator):
    """AR model estimated by the autocorrelation method.

    Attributes
    ----------
    coef_ : ndarray of shape (order + 1,)
        Prediction-error filter, ``coef_[0] == 1``.
    error_variance_ : float
    """

    def __init__(self, order=512):
        self.order = order

    def fit(self, X, y=None):
        self.model_ = lpc(check_signal(X), self.order)
        self.coef_ = self.model_.coeffs
        self.error_variance_ = self.model_.error_variance
        return self

    def prediction_error(self, X):
        check_is_fitted(self, "model_")
        return ar_error(self.model_, check_signal(X))

    def score(self, X, y=None):
        """Negative mean squared prediction error."""
        e = self.prediction_error(X)
        return -float(e @ e) / e.size


def _as_problem(X, mask):
    if not isinstance(X, Spectrogram):
        raise TypeError("X must be a Spectrogram")
    if not isinstance(mask, TFMask):
        mask = TFMask(tuple(mask), X.n_columns)
    return X, mask


class JanssenTFInpainter(TransformerMixin, BaseEstimator):
    """Spectrogram inpainting with AR modelling and ADMM.

    Parameters
    ----------
    rho, inner_iters, outer_iters, ar_order
        See :class:`tfinpaint.solver.AdmmConfig`.
    with_context : bool
        Return the signal of the spectrogram with the observed columns
        re-injected instead of the raw estimate.
    """

    def __init__(self, rho=1.0, inner_iters=20, outer_iters=10, ar_order=512, with_context=False):
        self.rho = rho
        self.inner_iters = inner_iters
        self.outer_iters = outer_iters
        self.ar_order = ar_order
        self.with_context = with_context

    def _config(self):
        return AdmmConfig(self.rho, self.inner_iters, self.outer_iters, self.ar_order)

    def _solve(self, X, mask):
        X, mask = _as_problem(X, mask)
        result = janssen_tf(X, mask, self._config())
        return result, (result.signal_context() if self.with_context else result.signal)

    def fit(self, X, mask):
        """Reconstruct `X` with missing columns `mask` (a TFMask or column indices)."""
        self.result_, self.signal_ = self._solve(X, mask)
        self.model_ = self.result_.model
        self.diagnostics_ = self.result_.diagnostics
        return self

    def transform(self, X, mask):
        return self._solve(X, mask)[1]

    def fit_transform(self, X, mask):
        return self.fit(X, mask).signal_


class GapwiseJanssenInpainter(TransformerMixin, BaseEstimator):
    """Time-domain Janssen inpainting applied gap by gap.

    ``fit``/``transform`` accept either a time signal with a boolean
    reliability mask, or a :class:`Spectrogram` with a column mask, in which
    case every sample under a missing column is treated as lost.
    """

    def __init__(self, order=512, iters=10, context=None):
        self.order = order
        self.iters = iters
        self.context = context

    def _solve(self, X, mask):
        if isinstance(X, Spectrogram):
            X, mask = _as_problem(X, mask)
            return baseline_from_spectrogram(X, mask, self.order, self.iters, self.context)[0]
        x = check_signal(X)
        reliable = check_mask_array(mask, x.size, "mask")
        return gapwise_janssen(x, reliable, self.order, self.iters, self.context)

    def fit(self, X, mask):
        self.signal_ = self._solve(X, mask)
        return self

    def transform(self, X, mask):
        return self._solve(X, mask)

    def fit_transform(self, X, mask):
        return self.fit(X, mask).signal_

