"""Spectrogram inpainting with autoregressive models and ADMM."""

__version__ = "0.1.0"

from .armodel import ARModel, autocorrelation, gram_plus_identity, levinson, lpc
from .baseline import baseline_from_spectrogram, fill_missing_ls, gapwise_janssen, janssen_td
from .degradation import DegradationPlan, degrade, plan_gaps
from .estimators import GapwiseJanssenInpainter, JanssenTFInpainter, LinearPredictor, StftTransformer
from .metrics import aggregate, bootstrap_mean_ci, snr
from .solver import AdmmConfig, admm_signal_update, janssen_tf, project_feasible
from .stft import Spectrogram, StftParams, TFMask, affected_samples, istft, stft

__all__ = [
    "ARModel",
    "AdmmConfig",
    "DegradationPlan",
    "GapwiseJanssenInpainter",
    "JanssenTFInpainter",
    "LinearPredictor",
    "Spectrogram",
    "StftParams",
    "StftTransformer",
    "TFMask",
    "admm_signal_update",
    "affected_samples",
    "aggregate",
    "autocorrelation",
    "baseline_from_spectrogram",
    "bootstrap_mean_ci",
    "degrade",
    "fill_missing_ls",
    "gapwise_janssen",
    "gram_plus_identity",
    "istft",
    "janssen_td",
    "janssen_tf",
    "levinson",
    "lpc",
    "plan_gaps",
    "project_feasible",
    "snr",
    "stft",
]
