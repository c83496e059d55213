"""WAV and mask-file reading and writing.

WAV input accepts mono or multichannel RIFF files with 8/16/32-bit integer
or 32/64-bit float samples. Integer PCM is scaled by ``1 / 2**(bits - 1)``,
so a 16-bit full-scale positive sample ``32767`` reads as ``32767/32768``
and ``-32768`` as ``-1``. Output is always 32-bit float mono.

Mask files are JSON documents::

    {
      "format": "tfinpaint-mask",
      "version": 1,
      "total_columns": 157,
      "gap_length": 2,
      "starts": [12, 40, 71, 99, 130],
      "n_gaps": 5,
      "seed": 123,
      "margin_columns": 4,
      "separation_columns": 8,
      "signal_length": 80000,
      "stft": {"win_len": 2048, "hop": 512, "n_channels": 2048,
               "window": "hann", "frame_offset": 0}
    }
"""

import json
import struct
import warnings
from dataclasses import asdict, dataclass

import numpy as np
from scipy.io import wavfile

from ._validation import check_positive_int, check_signal
from .degradation import DegradationPlan
from .exceptions import InconsistentMaskError, UnsupportedFormatError
from .stft import StftParams

__all__ = ["TimeSignal", "load_wav", "save_wav", "save_mask", "load_mask"]

MASK_FORMAT = "tfinpaint-mask"
MASK_VERSION = 1


@dataclass(frozen=True, eq=False)
class TimeSignal:
    """Real mono waveform with its sample rate in Hz."""

    samples: np.ndarray
    sample_rate: int

    def __post_init__(self):
        object.__setattr__(self, "samples", check_signal(self.samples, "samples"))
        check_positive_int(self.sample_rate, "sample_rate")

    def __len__(self):
        return self.samples.size


def load_wav(path):
    """Read a WAV file as a :class:`TimeSignal` with samples in ``[-1, 1]``.

    Multichannel files yield their first channel with a warning.

    Raises
    ------
    UnsupportedFormatError
        If the file is not a readable uncompressed WAV.
    """
    try:
        rate, data = wavfile.read(path)
    except FileNotFoundError:
        raise
    except (ValueError, EOFError, OSError, IndexError, struct.error) as exc:
        raise UnsupportedFormatError(f"{path}: {exc}") from None
    if data.ndim == 2:
        warnings.warn(f"{path}: {data.shape[1]} channels, using the first", stacklevel=2)
        data = data[:, 0]
    if data.size == 0:
        raise UnsupportedFormatError(f"{path}: no samples")
    kind = data.dtype.kind
    if kind == "f":
        samples = data.astype(np.float64)
    elif kind == "i":
        samples = data.astype(np.float64) / float(2 ** (8 * data.dtype.itemsize - 1))
    elif kind == "u" and data.dtype.itemsize == 1:
        samples = (data.astype(np.float64) - 128.0) / 128.0
    else:
        raise UnsupportedFormatError(f"{path}: unsupported sample type {data.dtype}")
    if not np.all(np.isfinite(samples)):
        raise UnsupportedFormatError(f"{path}: non-finite samples")
    return TimeSignal(samples, int(rate))


def save_wav(path, signal, sample_rate=None):
    """Write a 32-bit float mono WAV file.

    Samples outside ``[-1, 1]`` are clipped and counted.

    Returns
    -------
    int
        Number of clipped samples.
    """
    if isinstance(signal, TimeSignal):
        samples, rate = signal.samples, signal.sample_rate
    else:
        samples, rate = check_signal(signal), sample_rate
    rate = check_positive_int(rate, "sample_rate")
    n_clipped = int(np.count_nonzero(np.abs(samples) > 1.0))
    if n_clipped:
        warnings.warn(f"{path}: {n_clipped} samples clipped to [-1, 1]", stacklevel=2)
    data = np.clip(samples, -1.0, 1.0).astype(np.float32)
    try:
        wavfile.write(path, rate, data)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
    return n_clipped


def save_mask(path, plan, params, signal_length):
    doc = {
        "format": MASK_FORMAT,
        "version": MASK_VERSION,
        "total_columns": plan.n_columns,
        "gap_length": plan.gap_len_columns,
        "starts": list(plan.starts),
        "n_gaps": plan.n_gaps,
        "seed": plan.seed,
        "margin_columns": plan.margin_columns,
        "separation_columns": plan.separation_columns,
        "signal_length": int(signal_length),
        "stft": asdict(params),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_mask(path):
    """Read a mask file.

    Returns
    -------
    (DegradationPlan, StftParams, int)
        The plan, the transform geometry and the original signal length.
    """
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InconsistentMaskError(f"{path}: not a mask file ({exc})") from None
    if doc.get("format") != MASK_FORMAT:
        raise InconsistentMaskError(f"{path}: not a mask file")
    try:
        params = StftParams(**doc["stft"])
        plan = DegradationPlan(
            n_columns=int(doc["total_columns"]),
            gap_len_columns=int(doc["gap_length"]),
            starts=tuple(int(s) for s in doc["starts"]),
            seed=int(doc.get("seed", 0)),
            margin_columns=int(doc.get("margin_columns", 0)),
            separation_columns=int(doc.get("separation_columns", 0)),
        )
        length = int(doc["signal_length"])
    except (KeyError, TypeError) as exc:
        raise InconsistentMaskError(f"{path}: malformed mask file ({exc})") from None
    plan.mask()  # validates the column range
    return plan, params, length
