"""Seeded placement of missing-column gaps and spectrogram corruption."""

import hashlib
from dataclasses import dataclass

import numpy as np

from ._validation import check_positive_int
from .exceptions import CannotPlaceGapsError, InconsistentMaskError, InvalidParameterError
from .stft import Spectrogram, TFMask

__all__ = ["DegradationPlan", "plan_gaps", "degrade", "derive_seed"]


@dataclass(frozen=True)
class DegradationPlan:
    """Gap layout: `n_gaps` runs of `gap_len_columns` missing columns."""

    n_columns: int
    gap_len_columns: int
    starts: tuple = ()
    seed: int = 0
    margin_columns: int = 0
    separation_columns: int = 0

    @property
    def n_gaps(self):
        return len(self.starts)

    def mask(self):
        cols = [s + k for s in self.starts for k in range(self.gap_len_columns)]
        return TFMask(tuple(cols), self.n_columns)


def derive_seed(master_seed, *keys):
    """Stable 63-bit seed from a master seed and identifying keys."""
    text = "\x1f".join([str(int(master_seed))] + [str(k) for k in keys])
    return int.from_bytes(hashlib.sha256(text.encode()).digest()[:8], "big") >> 1


def plan_gaps(n_columns, gap_len, n_gaps=5, seed=0, margin=0, separation=0):
    """Draw gap start columns uniformly among all valid placements.

    A placement is valid when every gap lies in ``[margin, n_columns - margin)``
    and consecutive gaps are separated by at least `separation` observed
    columns. The draw is exact (no rejection loop): with slack
    ``S = n_columns - 2 margin - n_gaps gap_len - (n_gaps - 1) separation``,
    valid placements correspond one-to-one to ``n_gaps``-subsets of
    ``S + n_gaps`` items.

    Raises
    ------
    CannotPlaceGapsError
        If no valid placement exists.
    """
    n_columns = check_positive_int(n_columns, "n_columns")
    gap_len = check_positive_int(gap_len, "gap_len")
    n_gaps = check_positive_int(n_gaps, "n_gaps", minimum=0)
    margin = check_positive_int(margin, "margin", minimum=0)
    separation = check_positive_int(separation, "separation", minimum=0)
    plan = dict(
        n_columns=n_columns, gap_len_columns=gap_len, seed=int(seed),
        margin_columns=margin, separation_columns=separation,
    )
    if n_gaps == 0:
        return DegradationPlan(starts=(), **plan)
    slack = n_columns - 2 * margin - n_gaps * gap_len - (n_gaps - 1) * separation
    if slack < 0:
        raise CannotPlaceGapsError(
            f"{n_gaps} gaps of {gap_len} columns with separation {separation} and margin "
            f"{margin} need {n_columns - slack} columns, only {n_columns} available"
        )
    rng = np.random.default_rng(int(seed))
    picks = np.sort(rng.choice(slack + n_gaps, size=n_gaps, replace=False))
    starts = margin + picks + np.arange(n_gaps) * (gap_len + separation - 1)
    return DegradationPlan(starts=tuple(int(s) for s in starts), **plan)


def degrade(spec, plan):
    """Zero the planned columns. Returns the corrupted spectrogram and its mask."""
    if not isinstance(plan, DegradationPlan):
        raise InvalidParameterError("plan must be a DegradationPlan")
    if plan.n_columns != spec.n_columns:
        raise InconsistentMaskError(
            f"plan is for {plan.n_columns} columns, spectrogram has {spec.n_columns}"
        )
    mask = plan.mask()
    coeffs = np.array(spec.coeffs, copy=True)
    coeffs[:, list(mask.missing_columns)] = 0.0
    return Spectrogram(coeffs, spec.params, spec.length), mask
