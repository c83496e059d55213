"""Spectrogram inpainting by alternating AR estimation and ADMM signal updates.

Each outer iteration fits an AR model to the current signal estimate and
then solves

    minimize  1/2 ||A x||^2   subject to   M . stft(x) = M . X_cor

with ADMM, splitting on ``z = stft(x)``. Because the STFT is a Parseval
tight frame the x-update reduces to one banded linear solve with
``I + (1/rho) A^T A``, whose Cholesky factor is computed once per outer
iteration.
"""

import logging
import time
from dataclasses import dataclass, field

import numpy as np

from ._validation import check_positive_float, check_positive_int
from .armodel import ARModel, ar_error, gram_plus_identity, lpc
from .exceptions import DegenerateSignalError, InconsistentMaskError, NoReliableDataError
from .linalg import banded_cholesky, banded_solve
from .stft import Spectrogram, istft, stft

__all__ = [
    "AdmmConfig",
    "OuterIterationRecord",
    "SolveDiagnostics",
    "InpaintingResult",
    "project_feasible",
    "admm_signal_update",
    "janssen_tf",
]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AdmmConfig:
    """Hyperparameters of the solver.

    Attributes
    ----------
    rho : float
        ADMM step size.
    inner_iters : int
        ADMM iterations per AR model (K).
    outer_iters : int
        Number of AR re-estimations (I).
    ar_order : int
        AR model order p.
    """

    rho: float = 1.0
    inner_iters: int = 20
    outer_iters: int = 10
    ar_order: int = 512

    def __post_init__(self):
        check_positive_float(self.rho, "rho")
        check_positive_int(self.inner_iters, "inner_iters")
        check_positive_int(self.outer_iters, "outer_iters")
        check_positive_int(self.ar_order, "ar_order")


@dataclass(frozen=True)
class OuterIterationRecord:
    objective: float
    primal_residual: float
    wall_time: float
    residual_trace: tuple = ()


@dataclass
class SolveDiagnostics:
    iterations: list = field(default_factory=list)

    @property
    def objectives(self):
        return [rec.objective for rec in self.iterations]

    @property
    def primal_residuals(self):
        return [rec.primal_residual for rec in self.iterations]

    @property
    def wall_time(self):
        return sum(rec.wall_time for rec in self.iterations)


@dataclass(eq=False)
class InpaintingResult:
    """Output of :func:`janssen_tf`.

    `signal` is the final time-domain estimate (trimmed to the original
    length), `spectrogram` its analysis, and `spectrogram_context` the same
    coefficients with the observed columns re-injected.
    """

    signal: np.ndarray
    spectrogram: Spectrogram
    spectrogram_context: Spectrogram
    model: ARModel
    diagnostics: SolveDiagnostics

    def signal_context(self):
        """Time signal of the spectrogram with the observed columns restored."""
        return istft(self.spectrogram_context, self.spectrogram_context.length)


def _coeffs(spec):
    return spec.coeffs if isinstance(spec, Spectrogram) else np.asarray(spec)


def project_feasible(coeffs, observed, mask):
    """Replace the reliable columns of `coeffs` by those of `observed`.

    Accepts raw coefficient arrays or :class:`Spectrogram` objects; the
    return type follows `coeffs`.
    """
    values = _coeffs(coeffs)
    obs = _coeffs(observed)
    if values.shape != obs.shape or values.ndim != 2 or values.shape[1] != mask.n_columns:
        raise InconsistentMaskError(
            f"shapes {values.shape} and {obs.shape} are inconsistent with a mask of "
            f"{mask.n_columns} columns"
        )
    out = np.where(mask.reliable_columns()[None, :], obs, values)
    if isinstance(coeffs, Spectrogram):
        return coeffs.with_coeffs(out)
    return out


def _check_problem(observed, mask):
    if not isinstance(observed, Spectrogram):
        raise TypeError("observed coefficients must be given as a Spectrogram")
    if mask.n_columns != observed.n_columns:
        raise InconsistentMaskError(
            f"mask has {mask.n_columns} columns, spectrogram has {observed.n_columns}"
        )


def admm_signal_update(model, observed, mask, x_init, config, callback=None):
    """Run `config.inner_iters` ADMM iterations for a fixed AR model.

    Parameters
    ----------
    model : ARModel
    observed : Spectrogram
        Observed coefficients; only its reliable columns are used.
    mask : TFMask
    x_init : array_like
        Starting signal; shorter inputs are zero-padded to the frame grid.
    config : AdmmConfig
    callback : callable, optional
        Called as ``callback(k, x, z, u)`` after iteration ``k`` (1-based)
        with the current signal, split variable and scaled dual variable.

    Returns
    -------
    x : ndarray
        Signal of padded length.
    residuals : list of float
        Primal residual ``||stft(x_k) - z_k||`` after each iteration.
    """
    _check_problem(observed, mask)
    params = observed.params
    n_pad = observed.padded_length
    x0 = np.zeros(n_pad)
    x_init = np.asarray(x_init, dtype=np.float64)
    x0[: x_init.size] = x_init[:n_pad]

    factor = banded_cholesky(gram_plus_identity(model, n_pad, config.rho))
    keep = mask.reliable_columns()[None, :]
    obs = observed.coeffs

    def analysis(x):
        return stft(x, params).coeffs

    def synthesis(c):
        return istft(Spectrogram(c, params, n_pad))

    z = analysis(x0)
    u = np.zeros_like(z)
    x = x0
    residuals = []
    for k in range(1, config.inner_iters + 1):
        x = banded_solve(factor, synthesis(z - u))
        gx = analysis(x)
        v = gx + u
        z = np.where(keep, obs, v)
        u = v - z
        residuals.append(float(np.linalg.norm(gx - z)))
        if callback is not None:
            callback(k, x, z, u)
    return x, residuals


def janssen_tf(observed, mask, config=None):
    """Inpaint the missing columns of a spectrogram.

    The signal is initialized by the synthesis of the observed coefficients
    (missing columns zeroed); every outer iteration re-estimates the AR
    model from the current signal and refines the signal with
    :func:`admm_signal_update`.

    Raises
    ------
    NoReliableDataError
        If every column is missing.
    DegenerateSignalError
        If the initial signal has no energy although the observation does.
    """
    config = AdmmConfig() if config is None else config
    _check_problem(observed, mask)
    if len(mask.missing_columns) == mask.n_columns:
        raise NoReliableDataError("every spectrogram column is missing")

    params = observed.params
    length = observed.length if observed.length is not None else observed.padded_length
    observed = observed.with_coeffs(observed.coeffs * mask.reliable_columns()[None, :])
    x = istft(observed)
    diagnostics = SolveDiagnostics()

    # zero observation: zero is a fixed point of every step.
    # no missing column: the feasible set is the single signal istft(observed).
    if not np.any(observed.coeffs) or mask.is_empty:
        model = ARModel.identity(config.ar_order)
        spec = Spectrogram(stft(x, params).coeffs, params, length)
        return InpaintingResult(x[:length], spec, project_feasible(spec, observed, mask), model, diagnostics)

    model = None
    for i in range(config.outer_iters):
        start = time.perf_counter()
        try:
            model = lpc(x, config.ar_order)
        except DegenerateSignalError:
            if model is None:
                raise
            logger.warning("outer iteration %d: degenerate estimate, keeping previous AR model", i + 1)
        x, trace = admm_signal_update(model, observed, mask, x, config)
        e = ar_error(model, x)
        record = OuterIterationRecord(
            objective=0.5 * float(e @ e),
            primal_residual=trace[-1],
            wall_time=time.perf_counter() - start,
            residual_trace=tuple(trace),
        )
        diagnostics.iterations.append(record)
        logger.debug(
            "outer iteration %d: objective %.6g, residual %.3g",
            i + 1, record.objective, record.primal_residual,
        )

    spec = stft(x, params)
    spec = Spectrogram(spec.coeffs, params, length)
    context = project_feasible(spec, observed, mask)
    return InpaintingResult(x[:length], spec, context, model, diagnostics)
