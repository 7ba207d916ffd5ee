"""Histogram mutual information and embedding-delay selection.

All entropies and mutual informations are in bits (base-2 logs). Binning is
equidistant over each input's own range; empty cells carry no probability
mass and are skipped. Cell sums use exact accumulation (``math.fsum``), so
``mutual_information(x, y)`` and ``mutual_information(y, x)`` agree
bit-for-bit.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from ..errors import InsufficientLengthError
from ..timeseries import TimeSeries

DEFAULT_BINS = 16


class LagSelectionWarning(UserWarning):
    """Emitted when no usable minimum exists in the lag-MI curve."""


def _as_samples(x) -> np.ndarray:
    if isinstance(x, TimeSeries):
        return x.samples
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError(f"expected a 1-D series, got shape {x.shape}")
    return x


def _bin_indices(x: np.ndarray, bins: int) -> np.ndarray:
    lo = x.min()
    hi = x.max()
    if hi == lo:
        return np.zeros(x.size, dtype=np.intp)
    idx = np.floor((x - lo) / (hi - lo) * bins).astype(np.intp)
    return np.clip(idx, 0, bins - 1)


def _entropy_bits(counts: np.ndarray, n: int) -> float:
    p = counts[counts > 0] / n
    return math.fsum(-v * math.log2(v) for v in p)


@dataclass(frozen=True)
class MiEstimate:
    """Mutual information of one pair of series, with its entropy parts.

    ``value`` is the direct cell sum of ``p * log2(p / (px * py))``; the
    identity ``value = h_x + h_y - h_xy`` holds to within accumulation error.
    """

    value: float
    h_x: float
    h_y: float
    h_xy: float
    bins: int


def mutual_information(x, y, bins: int = DEFAULT_BINS) -> MiEstimate:
    """Histogram mutual information between two equal-length series.

    Parameters
    ----------
    x, y : TimeSeries or 1-D array-like
    bins : int
        Number of equidistant bins per axis, each spanning that series' own
        [min, max].

    Returns
    -------
    MiEstimate
    """
    xv = _as_samples(x)
    yv = _as_samples(y)
    if xv.size != yv.size:
        raise ValueError(f"series lengths differ: {xv.size} vs {yv.size}")
    if xv.size == 0:
        raise ValueError("series must be non-empty")
    if bins < 1:
        raise ValueError(f"bins must be >= 1, got {bins}")
    n = xv.size
    ix = _bin_indices(xv, bins)
    iy = _bin_indices(yv, bins)
    joint = np.bincount(ix * bins + iy, minlength=bins * bins).reshape(bins, bins)
    row = joint.sum(axis=1)
    col = joint.sum(axis=0)
    h_x = _entropy_bits(row, n)
    h_y = _entropy_bits(col, n)
    h_xy = _entropy_bits(joint.ravel(), n)
    ii, jj = np.nonzero(joint)
    pij = joint[ii, jj] / n
    px = row[ii] / n
    py = col[jj] / n
    terms = pij * np.log2(pij / (px * py))
    value = math.fsum(terms)
    return MiEstimate(value=value, h_x=h_x, h_y=h_y, h_xy=h_xy, bins=bins)


def lag_mutual_information(x, max_lag: int, bins: int = DEFAULT_BINS) -> np.ndarray:
    """Self mutual information of a series against its lagged copy.

    Element ``m`` is ``MI(x[0:N-m], x[m:N])`` in bits; element 0 is the
    series' own entropy.

    Raises
    ------
    InsufficientLengthError
        If ``max_lag`` leaves no overlap (``max_lag >= len(x) - 1``).
    """
    xv = _as_samples(x)
    n = xv.size
    if max_lag < 0:
        raise ValueError(f"max_lag must be >= 0, got {max_lag}")
    if max_lag >= n - 1:
        raise InsufficientLengthError(
            f"max_lag {max_lag} leaves no overlap for a series of {n} samples"
        )
    out = np.empty(max_lag + 1)
    for m in range(max_lag + 1):
        if m == 0:
            out[0] = mutual_information(xv, xv, bins).value
        else:
            out[m] = mutual_information(xv[:-m], xv[m:], bins).value
    return out


def select_lag_from_curve(mi: np.ndarray) -> tuple[int, bool]:
    """Pick an embedding delay from a lag-MI curve.

    Preference order: the first local minimum (``I(m) < I(m-1)`` and
    ``I(m) <= I(m+1)``); failing that, the first lag where the curve drops
    below ``I(0)/5``; failing that, the last lag available. The flag in the
    return value is True only for the last-resort case.
    """
    max_lag = len(mi) - 1
    for m in range(1, max_lag):
        if mi[m] < mi[m - 1] and mi[m] <= mi[m + 1]:
            return m, False
    threshold = mi[0] / 5.0
    for m in range(1, max_lag + 1):
        if mi[m] < threshold:
            return m, False
    return max_lag, True


def select_lag(x, max_lag: int, bins: int = DEFAULT_BINS) -> int:
    """Embedding delay from the first minimum of the lag-MI curve.

    See :func:`select_lag_from_curve` for the fallback order. Warns with
    :class:`LagSelectionWarning` when no minimum exists and ``max_lag``
    itself is returned.
    """
    if max_lag < 1:
        raise ValueError(f"max_lag must be >= 1, got {max_lag}")
    mi = lag_mutual_information(x, max_lag, bins)
    lag, exhausted = select_lag_from_curve(mi)
    if exhausted:
        warnings.warn(
            f"no minimum in lag mutual information up to lag {max_lag}; using {max_lag}",
            LagSelectionWarning,
            stacklevel=2,
        )
    return lag
