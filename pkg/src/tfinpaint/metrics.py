"""Reconstruction quality metrics and bootstrap aggregation."""

import math
from dataclasses import dataclass

import numpy as np

from ._validation import check_positive_int, check_signal
from .exceptions import InsufficientDataError, InvalidParameterError, UndefinedReferenceError

__all__ = [
    "METHODS",
    "MetricsRecord",
    "AggregateRow",
    "snr",
    "snr_region",
    "bootstrap_mean_ci",
    "aggregate",
    "is_strictly_decreasing",
]

METHODS = ("janssen_tf_raw", "janssen_tf_context", "gapwise_janssen")


@dataclass(frozen=True)
class MetricsRecord:
    signal_id: str
    method: str
    gap_len: int
    snr_db: float
    runtime_s: float = 0.0
    seed: int = 0
    snr_gap_db: float = math.nan


@dataclass(frozen=True)
class AggregateRow:
    method: str
    gap_len: int
    mean_snr_db: float
    ci_lo: float
    ci_hi: float
    n: int
    n_infinite: int = 0

    @property
    def degenerate(self):
        """True when the interval could not be estimated (fewer than two finite values)."""
        return self.n < 2


def snr(x_ref, x_est):
    """Signal-to-noise ratio ``10 log10(||x_ref||^2 / ||x_ref - x_est||^2)`` in dB.

    Returns ``inf`` for an exact reconstruction.
    """
    x_ref = check_signal(x_ref, "x_ref")
    x_est = check_signal(x_est, "x_est")
    if x_ref.shape != x_est.shape:
        raise InvalidParameterError(f"length mismatch: {x_ref.size} vs {x_est.size}")
    ref_energy = float(x_ref @ x_ref)
    if ref_energy == 0.0:
        raise UndefinedReferenceError("reference signal has zero energy")
    err = x_ref - x_est
    err_energy = float(err @ err)
    if err_energy == 0.0:
        return math.inf
    return 10.0 * math.log10(ref_energy / err_energy)


def snr_region(x_ref, x_est, region):
    """SNR restricted to the samples where `region` is True."""
    region = np.asarray(region, dtype=bool)
    return snr(np.asarray(x_ref)[region], np.asarray(x_est)[region])


def bootstrap_mean_ci(values, alpha=0.05, n_resamples=10000, seed=0):
    """Percentile bootstrap interval for the mean.

    Returns
    -------
    (mean, lower, upper)
        The interval is widened to contain the sample mean if the percentile
        endpoints happen to exclude it.
    """
    values = np.asarray(values, dtype=np.float64)
    if values.ndim != 1 or values.size < 2:
        raise InsufficientDataError("need at least two values for a bootstrap interval")
    if not 0.0 < alpha < 1.0:
        raise InvalidParameterError(f"alpha must lie in (0, 1), got {alpha}")
    n_resamples = check_positive_int(n_resamples, "n_resamples")
    rng = np.random.default_rng(seed)
    idx = rng.integers(0, values.size, size=(n_resamples, values.size))
    means = values[idx].mean(axis=1)
    lower, upper = np.quantile(means, [alpha / 2.0, 1.0 - alpha / 2.0])
    mean = float(values.mean())
    return mean, float(min(lower, mean)), float(max(upper, mean))


def aggregate(records, alpha=0.05, n_resamples=10000, seed=0):
    """Mean SNR with bootstrap interval per ``(method, gap_len)``.

    Infinite SNRs (exact reconstructions) are left out of the statistics and
    counted in ``n_infinite``. Keys with a single finite value get a
    degenerate interval equal to that value.
    """
    groups = {}
    for rec in records:
        groups.setdefault((rec.method, rec.gap_len), []).append(rec.snr_db)
    rows = []
    for (method, gap_len), vals in sorted(groups.items()):
        finite = [v for v in vals if math.isfinite(v)]
        n_inf = len(vals) - len(finite)
        if len(finite) >= 2:
            mean, lo, hi = bootstrap_mean_ci(finite, alpha, n_resamples, seed)
        elif finite:
            mean = lo = hi = float(finite[0])
        else:
            mean = lo = hi = math.nan
        rows.append(AggregateRow(method, gap_len, mean, lo, hi, len(finite), n_inf))
    return rows


def is_strictly_decreasing(rows, method):
    """Whether the mean SNR of `method` strictly decreases with the gap length."""
    series = sorted((r.gap_len, r.mean_snr_db) for r in rows if r.method == method)
    means = [m for _, m in series]
    return len(means) >= 2 and all(b < a for a, b in zip(means, means[1:]))
