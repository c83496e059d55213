"""Banded Cholesky factorization and solves for symmetric positive-definite systems."""

from dataclasses import dataclass

import numpy as np
from scipy import linalg as sla

from .armodel import BandedSpdMatrix
from .exceptions import InconsistentMaskError, NotPositiveDefiniteError

__all__ = ["BandedCholesky", "banded_cholesky", "banded_solve"]


@dataclass(frozen=True, eq=False)
class BandedCholesky:
    """Lower band factor ``L`` with ``L L^T = B``, in the same storage as `BandedSpdMatrix`."""

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
            out[np.arange(k, n), np.arange(n - k)] = self.bands[k, : n - k]
        return out


def banded_cholesky(matrix):
    """Factor a banded SPD matrix; the factor keeps the bandwidth.

    Raises
    ------
    NotPositiveDefiniteError
        If a non-positive pivot is met.
    """
    bands = np.asarray(matrix.bands if isinstance(matrix, BandedSpdMatrix) else matrix, dtype=np.float64)
    # padding beyond the last row is never read by LAPACK but must be finite for check_finite
    bands = bands.copy()
    n = bands.shape[1]
    for k in range(1, bands.shape[0]):
        bands[k, max(n - k, 0) :] = 0.0
    try:
        factor = sla.cholesky_banded(bands, lower=True)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefiniteError(str(exc)) from None
    return BandedCholesky(factor)


def banded_solve(factor, v):
    """Solve ``B x = v`` given the banded Cholesky factor of ``B``."""
    v = np.asarray(v, dtype=np.float64)
    if v.shape[0] != factor.dimension:
        raise InconsistentMaskError(
            f"right-hand side of length {v.shape[0]} does not match dimension {factor.dimension}"
        )
    return sla.cho_solve_banded((factor.bands, True), v, check_finite=False)
