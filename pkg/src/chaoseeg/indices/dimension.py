"""Correlation dimension from pairwise correlation sums.

The correlation sum C(eps) is the fraction of temporally separated point
pairs closer than eps. Over a scaling region log C grows linearly in
log eps; the slope of that line is the correlation dimension.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import NoAdmissibleNeighborError, ScalingRegionError
from ..timeseries import (
    DelayEmbedding,
    TimeSeries,
    default_theiler,
    delay_embed,
    _check_norm,
)

DEFAULT_N_RADII = 24
SLOPE_BAND = 0.15  # admissible relative deviation of local slopes in a run
FALLBACK_C_RANGE = (1e-3, 1e-1)
# Distance percentiles bounding the radii. The floor sits at the 0.1th
# percentile because C(eps) at the q-th percentile is roughly q/100: a
# higher floor would cut off the small-sum end of the fit band above.
_RADII_PERCENTILES = (0.1, 50.0)
_RADII_SAMPLE_PAIRS = 100_000
_RADII_SAMPLE_SEED = 1771450983  # fixed: radii choice must be reproducible


def _points_of(embedding) -> np.ndarray:
    if isinstance(embedding, DelayEmbedding):
        return embedding.points
    pts = np.asarray(embedding, dtype=np.float64)
    if pts.ndim != 2:
        raise ValueError(f"expected an embedding or 2-D point array, got shape {pts.shape}")
    return pts


@dataclass(frozen=True)
class GpResult:
    """Correlation-dimension estimate with its fit diagnostics.

    ``fit_range`` holds inclusive radius indices (lo, hi); ``fit_residual``
    is the RMS residual of the log-log line over that range.
    """

    d2: float
    fit_range: tuple[int, int]
    fit_residual: float
    radii: np.ndarray
    corr: np.ndarray


def correlation_sum(
    embedding,
    radii,
    theiler: int = 0,
    norm: str = "chebyshev",
) -> np.ndarray:
    """Fraction of admissible pairs within each radius.

    Pairs (i, j) with ``i < j`` and ``j - i > theiler`` are admissible; the
    count within each radius is divided by the number of admissible pairs,
    so values lie in [0, 1] and reach 1 once every pair is covered.

    Parameters
    ----------
    embedding : DelayEmbedding or (n, m) array
    radii : ascending positive radii
    theiler : int
        Temporal exclusion in samples.

    Raises
    ------
    NoAdmissibleNeighborError
        If the exclusion leaves no pair at all.
    """
    _check_norm(norm)
    pts = _points_of(embedding)
    radii = np.asarray(radii, dtype=np.float64)
    if radii.ndim != 1 or radii.size == 0:
        raise ValueError("radii must be a non-empty 1-D sequence")
    if not np.all(radii > 0):
        raise ValueError("radii must be positive")
    if np.any(np.diff(radii) <= 0):
        raise ValueError("radii must be strictly ascending")
    if theiler < 0:
        raise ValueError(f"theiler must be >= 0, got {theiler}")
    n = pts.shape[0]
    chebyshev = norm == "chebyshev"
    hist = np.zeros(radii.size + 1, dtype=np.int64)
    total = 0
    for i in range(n - theiler - 1):
        row = pts[i + theiler + 1 :]
        diff = np.abs(row - pts[i])
        if chebyshev:
            d = diff.max(axis=1)
        else:
            d = np.sqrt((diff * diff).sum(axis=1))
        hist += np.bincount(
            np.searchsorted(radii, d, side="left"), minlength=radii.size + 1
        )
        total += d.size
    if total == 0:
        raise NoAdmissibleNeighborError(
            f"theiler window {theiler} leaves no admissible pair among {n} points"
        )
    return np.cumsum(hist[:-1]) / total


def _longest_uniform_run(slopes: np.ndarray, valid: np.ndarray) -> tuple[int, int] | None:
    """Longest contiguous slope run deviating < SLOPE_BAND from its own median.

    Returns inclusive slope-index bounds, requiring at least two slopes
    (three radii). Earlier runs win length ties.
    """
    best = None
    k = slopes.size
    for a in range(k):
        if not valid[a]:
            continue
        for b in range(a + 1, k):
            if not valid[b]:
                break
            seg = slopes[a : b + 1]
            med = np.median(seg)
            if np.all(np.abs(seg - med) < SLOPE_BAND * abs(med)):
                length = b - a + 1
                if best is None or length > best[2]:
                    best = (a, b, length)
    if best is None:
        return None
    return best[0], best[1]


def correlation_dimension(
    series: TimeSeries,
    m: int,
    lag: int,
    n_radii: int = DEFAULT_N_RADII,
    theiler: int | None = None,
    norm: str = "chebyshev",
) -> GpResult:
    """Correlation dimension of a delay-embedded scalar series.

    Radii are log-spaced between the 0.1th and 50th percentile of a sampled
    pairwise-distance distribution (fixed internal sample, so results are
    reproducible). Scaling holds only where the correlation sum is small,
    so the fit is confined to radii with sums in [1e-3, 1e-1]; within that
    band the fitted range is the longest contiguous run of adjacent-radius
    slopes staying within 15% of the run's own median slope, with the whole
    band as fallback. If the band itself has fewer than 3 radii, the run
    search falls back to every radius with a sum inside (0, 1).

    Raises
    ------
    ScalingRegionError
        If fewer than 3 radii have correlation sums strictly inside (0, 1),
        or no fit range of at least 3 radii can be formed.
    """
    if n_radii < 3:
        raise ValueError(f"n_radii must be >= 3, got {n_radii}")
    if theiler is None:
        theiler = default_theiler(series.sampling_rate)
    embedding = delay_embed(series, m, lag)
    pts = embedding.points
    n = pts.shape[0]
    if n - theiler - 1 <= 0:
        raise NoAdmissibleNeighborError(
            f"theiler window {theiler} leaves no admissible pair among {n} points"
        )
    rng = np.random.default_rng(_RADII_SAMPLE_SEED)
    i = rng.integers(0, n, size=_RADII_SAMPLE_PAIRS)
    j = rng.integers(0, n, size=_RADII_SAMPLE_PAIRS)
    keep = np.abs(i - j) > theiler
    i, j = i[keep], j[keep]
    diff = np.abs(pts[i] - pts[j])
    sample = diff.max(axis=1) if norm == "chebyshev" else np.sqrt((diff * diff).sum(axis=1))
    lo, hi = np.percentile(sample, list(_RADII_PERCENTILES))
    if lo <= 0:
        positive = sample[sample > 0]
        if positive.size == 0:
            raise ScalingRegionError("no scaling region: all sampled distances vanish")
        lo = float(positive.min())
    if not (lo < hi):
        raise ScalingRegionError("no scaling region: sampled distances span no range")
    radii = np.geomspace(lo, hi, n_radii)
    corr = correlation_sum(embedding, radii, theiler=theiler, norm=norm)

    interior = (corr > 0.0) & (corr < 1.0)
    if int(interior.sum()) < 3:
        raise ScalingRegionError(
            "no scaling region: fewer than 3 radii with correlation sums inside (0, 1)"
        )
    log_r = np.log(radii)
    with np.errstate(divide="ignore"):
        log_c = np.log(corr)
    slopes = np.full(n_radii - 1, np.nan)
    for k in range(n_radii - 1):
        if corr[k] > 0.0 and corr[k + 1] > 0.0:
            slopes[k] = (log_c[k + 1] - log_c[k]) / (log_r[k + 1] - log_r[k])
    band = np.flatnonzero((corr >= FALLBACK_C_RANGE[0]) & (corr <= FALLBACK_C_RANGE[1]))
    if band.size >= 3:
        in_band = np.zeros(n_radii - 1, dtype=bool)
        in_band[band[0] : band[-1]] = True  # slopes fully inside the band
        run = _longest_uniform_run(slopes, in_band & ~np.isnan(slopes))
        if run is not None and run[1] - run[0] + 1 >= 2:
            lo_idx, hi_idx = run[0], run[1] + 1  # slopes a..b span radii a..b+1
        else:
            lo_idx, hi_idx = int(band[0]), int(band[-1])
    else:
        run = _longest_uniform_run(slopes, ~np.isnan(slopes))
        if run is None:
            raise ScalingRegionError(
                "no scaling region: no uniform slope run and fewer than 3 radii "
                f"with correlation sums in [{FALLBACK_C_RANGE[0]}, {FALLBACK_C_RANGE[1]}]"
            )
        lo_idx, hi_idx = run[0], run[1] + 1
    xs = log_r[lo_idx : hi_idx + 1]
    ys = log_c[lo_idx : hi_idx + 1]
    slope, intercept = np.polyfit(xs, ys, 1)
    resid = ys - (slope * xs + intercept)
    return GpResult(
        d2=float(slope),
        fit_range=(lo_idx, hi_idx),
        fit_residual=float(np.sqrt(np.mean(resid * resid))),
        radii=radii,
        corr=corr,
    )
