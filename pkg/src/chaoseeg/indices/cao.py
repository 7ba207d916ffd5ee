"""Minimum embedding dimension by Cao's nearest-neighbor expansion method.

For each trial dimension m the method compares nearest-neighbor distances in
dimension m and m+1 (max norm). Their mean ratio E(m) yields
E1(m) = E(m+1)/E(m), which stops changing once the attractor is unfolded;
the companion statistic E2 (from one-step images of neighbors) separates
deterministic signals (E2 varies with m) from stochastic ones (E2 ~ 1).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateEmbeddingError, InsufficientLengthError
from ..timeseries import TimeSeries, all_nearest_neighbors, default_theiler, delay_embed

DEFAULT_SATURATION_TOL = 0.05


@dataclass(frozen=True)
class CaoResult:
    """E1/E2 curves and the saturation read-off.

    ``e1[i]`` and ``e2[i]`` correspond to trial dimension ``m = i + 1``.
    ``minimum_dim`` is None when E1 never settles within ``saturation_tol``
    over the computed range.
    """

    e1: np.ndarray
    e2: np.ndarray
    minimum_dim: int | None
    saturation_tol: float

    @property
    def saturated(self) -> bool:
        return self.minimum_dim is not None


def cao_embedding_dimension(
    series: TimeSeries,
    lag: int,
    m_max: int,
    saturation_tol: float = DEFAULT_SATURATION_TOL,
    theiler: int | None = None,
) -> CaoResult:
    """Estimate the minimum embedding dimension of a scalar series.

    Parameters
    ----------
    series : TimeSeries
    lag : int
        Embedding delay in samples.
    m_max : int
        Largest trial dimension; E1 and E2 are produced for m = 1..m_max.
    saturation_tol : float
        |E1(m+1) - E1(m)| below this counts as settled.
    theiler : int, optional
        Exclusion window for the neighbor searches; defaults per the
        sampling rate (1 for maps, rate/10 for flows).

    Returns
    -------
    CaoResult
        ``minimum_dim`` is the smallest d whose E1 increments stay inside
        the tolerance for every computed m >= d - 1, i.e. one above the
        dimension where the curve settles; None if that never happens.

    Raises
    ------
    InsufficientLengthError
        If the series cannot host the dimension-(m_max + 2) comparisons.
    DegenerateEmbeddingError
        If more than 20% of nearest-neighbor distances vanish at some m.
    """
    if m_max < 2:
        raise ValueError(f"m_max must be >= 2, got {m_max}")
    if theiler is None:
        theiler = default_theiler(series.sampling_rate)
    n = len(series)
    x = series.samples
    # E(m) for m = 1..m_max+1 needs neighbor comparisons up to dim m_max+2
    if n - (m_max + 1) * lag < 2:
        raise InsufficientLengthError(
            f"insufficient length: {n} samples cannot support m_max {m_max} at lag {lag}; "
            f"need at least {(m_max + 1) * lag + 2}"
        )
    e_ratio = np.empty(m_max + 1)
    e_image = np.empty(m_max + 1)
    for m in range(1, m_max + 2):
        count_next = n - m * lag  # points that extend to dimension m+1
        pts_m = delay_embed(series, m, lag).points[:count_next]
        pts_next = delay_embed(series, m + 1, lag).points
        nn_idx, nn_dist = all_nearest_neighbors(pts_m, theiler=theiler, norm="chebyshev")
        rows = np.arange(count_next)
        dist_next = np.abs(pts_next[rows] - pts_next[nn_idx]).max(axis=1)
        nonzero = nn_dist > 0.0
        excluded = count_next - int(nonzero.sum())
        if excluded > 0.2 * count_next:
            raise DegenerateEmbeddingError(
                f"degenerate embedding: {excluded} of {count_next} nearest-neighbor "
                f"distances vanish at dimension {m}"
            )
        e_ratio[m - 1] = float(np.mean(dist_next[nonzero] / nn_dist[nonzero]))
        e_image[m - 1] = float(np.mean(np.abs(x[rows + m * lag] - x[nn_idx + m * lag])))
    e1 = e_ratio[1:] / e_ratio[:-1]
    e2 = e_image[1:] / e_image[:-1]
    minimum_dim = None
    deltas = np.abs(np.diff(e1))  # deltas[i] = |E1(m+1) - E1(m)| at m = i + 1
    for d in range(2, m_max + 1):
        if np.all(deltas[d - 2 :] < saturation_tol):
            minimum_dim = d
            break
    return CaoResult(
        e1=e1, e2=e2, minimum_dim=minimum_dim, saturation_tol=float(saturation_tol)
    )
