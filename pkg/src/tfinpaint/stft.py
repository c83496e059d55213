"""Parseval tight-frame STFT with cyclic framing.

The analysis operator ``stft`` and the synthesis operator ``istft`` are exact
adjoints of each other and satisfy ``istft(stft(x)) == x`` for every signal
(zero-padded to a multiple of the hop). Spectrogram coefficients are stored
as a complex ``(n_bins, n_columns)`` array, one column per time frame, with
the one-sided bins ``1 .. n_channels/2 - 1`` weighted by ``sqrt(2)`` so that
the coefficient energy equals the signal energy.
"""

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from ._validation import check_positive_int, check_signal
from .exceptions import InconsistentMaskError, InvalidParameterError, NonTileableWindowError

__all__ = [
    "StftParams",
    "Spectrogram",
    "TFMask",
    "make_window",
    "normalize_tight",
    "stft",
    "istft",
    "padded_length",
    "affected_samples",
]

WINDOW_KINDS = ("hann",)


def make_window(kind, length):
    """Periodic window of the given kind, ``w(n) = 0.5 (1 - cos(2 pi n / length))`` for Hann."""
    if kind not in WINDOW_KINDS:
        raise InvalidParameterError(f"unknown window kind {kind!r}; expected one of {WINDOW_KINDS}")
    if isinstance(length, bool) or not isinstance(length, (int, np.integer)) or length < 2:
        raise InvalidParameterError(f"window length must be an integer >= 2, got {length!r}")
    n = np.arange(length)
    return 0.5 * (1.0 - np.cos(2.0 * np.pi * n / length))


def normalize_tight(window, hop):
    """Scale `window` so that its squared shifts by `hop` sum to one.

    Raises
    ------
    NonTileableWindowError
        If the overlap-added squared window is not constant (1e-12 relative).
    """
    window = np.asarray(window, dtype=np.float64)
    length = window.size
    hop = check_positive_int(hop, "hop")
    if length % hop != 0:
        raise InvalidParameterError(f"hop {hop} must divide the window length {length}")
    ola = (window**2).reshape(-1, hop).sum(axis=0)
    c = ola.mean()
    if c <= 0 or np.max(np.abs(ola - c)) > 1e-12 * c:
        raise NonTileableWindowError(
            f"squared window does not overlap-add to a constant at hop {hop} "
            f"(range {ola.min():.6g} .. {ola.max():.6g})"
        )
    return window / np.sqrt(c)


@dataclass(frozen=True)
class StftParams:
    """Frame geometry of the transform.

    `frame_offset` shifts every frame start by a number of samples
    (frame ``t`` covers ``t*hop - frame_offset`` onwards, cyclically), which
    lets column indices be aligned with transforms that pad the signal
    before framing.
    """

    win_len: int = 2048
    hop: int = 512
    n_channels: int = 2048
    window: str = "hann"
    frame_offset: int = 0

    def __post_init__(self):
        check_positive_int(self.win_len, "win_len", minimum=2)
        check_positive_int(self.hop, "hop")
        check_positive_int(self.n_channels, "n_channels", minimum=2)
        if self.win_len % self.hop != 0:
            raise InvalidParameterError(f"hop {self.hop} must divide win_len {self.win_len}")
        if self.n_channels < self.win_len:
            raise InvalidParameterError("n_channels must be >= win_len")
        if self.n_channels % 2 != 0:
            raise InvalidParameterError("n_channels must be even")
        if self.window not in WINDOW_KINDS:
            raise InvalidParameterError(f"unknown window kind {self.window!r}")
        if isinstance(self.frame_offset, bool) or not isinstance(self.frame_offset, (int, np.integer)):
            raise InvalidParameterError("frame_offset must be an integer")

    @property
    def n_bins(self):
        return self.n_channels // 2 + 1

    @property
    def frames_per_window(self):
        return self.win_len // self.hop

    def analysis_window(self):
        return _tight_window(self).copy()


@dataclass(frozen=True, eq=False)
class Spectrogram:
    """Complex coefficients of shape ``(n_bins, n_columns)`` with their geometry.

    `length` is the number of signal samples before zero-padding.
    """

    coeffs: np.ndarray
    params: StftParams = field(default_factory=StftParams)
    length: int | None = None

    @property
    def n_columns(self):
        return self.coeffs.shape[1]

    @property
    def padded_length(self):
        return self.n_columns * self.params.hop

    def with_coeffs(self, coeffs):
        coeffs = np.asarray(coeffs)
        if coeffs.shape != self.coeffs.shape:
            raise InconsistentMaskError(
                f"coefficient shape {coeffs.shape} differs from {self.coeffs.shape}"
            )
        return Spectrogram(coeffs, self.params, self.length)

    def energy(self):
        return float(np.vdot(self.coeffs, self.coeffs).real)


@dataclass(frozen=True)
class TFMask:
    """Set of missing spectrogram columns out of `n_columns`."""

    missing_columns: tuple = ()
    n_columns: int = 0

    def __post_init__(self):
        cols = tuple(sorted(int(c) for c in self.missing_columns))
        if len(set(cols)) != len(cols):
            raise InconsistentMaskError("missing column indices must be unique")
        if cols and (cols[0] < 0 or cols[-1] >= self.n_columns):
            raise InconsistentMaskError(
                f"missing columns must lie in [0, {self.n_columns}), got {cols[0]}..{cols[-1]}"
            )
        object.__setattr__(self, "missing_columns", cols)

    @classmethod
    def empty(cls, n_columns):
        return cls((), n_columns)

    @property
    def is_empty(self):
        return not self.missing_columns

    def reliable_columns(self):
        """Boolean vector over columns, True where the column is observed."""
        keep = np.ones(self.n_columns, dtype=bool)
        keep[list(self.missing_columns)] = False
        return keep

    def as_matrix(self, n_bins):
        """Binary mask with the shape of the coefficient array."""
        return np.broadcast_to(self.reliable_columns(), (n_bins, self.n_columns)).astype(np.float64)

    def runs(self):
        """Maximal runs of consecutive missing columns as ``(start, length)`` pairs."""
        out = []
        for c in self.missing_columns:
            if out and out[-1][0] + out[-1][1] == c:
                out[-1][1] += 1
            else:
                out.append([c, 1])
        return [tuple(r) for r in out]


def padded_length(n, hop):
    """Length of a signal of `n` samples zero-padded to a multiple of `hop`."""
    return -(-n // hop) * hop


@lru_cache(maxsize=16)
def _tight_window(params):
    return normalize_tight(make_window(params.window, params.win_len), params.hop)


@lru_cache(maxsize=16)
def _frame_indices(n_pad, params):
    n_frames = n_pad // params.hop
    starts = np.arange(n_frames) * params.hop - params.frame_offset
    idx = (starts[:, None] + np.arange(params.win_len)[None, :]) % n_pad
    idx.flags.writeable = False
    return idx


def _bin_weights(n_channels):
    weights = np.full(n_channels // 2 + 1, np.sqrt(2.0))
    weights[0] = weights[-1] = 1.0
    return weights


def stft(x, params=None):
    """Tight-frame analysis of a real signal.

    Parameters
    ----------
    x : array_like
        Real 1-D signal.
    params : StftParams, optional
        Frame geometry; defaults to a 2048-sample Hann window at 75% overlap.

    Returns
    -------
    Spectrogram
    """
    params = StftParams() if params is None else params
    x = check_signal(x)
    n_pad = padded_length(x.size, params.hop)
    xp = np.zeros(n_pad)
    xp[: x.size] = x
    frames = xp[_frame_indices(n_pad, params)] * _tight_window(params)
    spec = np.fft.rfft(frames, n=params.n_channels, axis=1, norm="ortho")
    spec *= _bin_weights(params.n_channels)
    return Spectrogram(np.ascontiguousarray(spec.T), params, x.size)


def istft(spec, length=None):
    """Adjoint of :func:`stft`; the inverse on the range of the analysis.

    Returns the signal of padded length, or truncated to `length` samples
    when given.
    """
    params = spec.params
    coeffs = np.asarray(spec.coeffs)
    if coeffs.ndim != 2 or coeffs.shape[0] != params.n_bins:
        raise InconsistentMaskError(
            f"coefficients of shape {coeffs.shape} do not match {params.n_bins} bins"
        )
    n_pad = coeffs.shape[1] * params.hop
    d = coeffs.T / _bin_weights(params.n_channels)
    frames = np.fft.irfft(d, n=params.n_channels, axis=1, norm="ortho")[:, : params.win_len]
    frames *= _tight_window(params)
    idx = _frame_indices(n_pad, params)
    x = np.bincount(idx.ravel(), weights=frames.ravel(), minlength=n_pad)
    if length is not None:
        x = x[:length]
    return x


def affected_samples(mask, params, n):
    """Time-domain reliability mask induced by missing spectrogram columns.

    Every sample inside the window footprint ``[t*hop, t*hop + win_len)`` of
    a missing column ``t`` (shifted by the frame offset and wrapped
    cyclically over the padded length) is marked unreliable.

    Returns
    -------
    ndarray of bool, shape (n,)
        True where the sample is reliable.
    """
    n_pad = padded_length(n, params.hop)
    if mask.n_columns != n_pad // params.hop:
        raise InconsistentMaskError(
            f"mask has {mask.n_columns} columns but {n} samples give {n_pad // params.hop}"
        )
    reliable = np.ones(n_pad, dtype=bool)
    if mask.missing_columns:
        idx = _frame_indices(n_pad, params)[list(mask.missing_columns)]
        reliable[idx.ravel()] = False
    return reliable[:n]
