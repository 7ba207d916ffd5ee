"""Time-series container, windowing, normalization, and delay embedding.

Everything downstream (chaos indices, feature extraction) works on the two
types defined here: :class:`TimeSeries` for uniformly sampled scalar signals
and :class:`DelayEmbedding` for their delay-coordinate reconstructions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    InsufficientLengthError,
    NoAdmissibleNeighborError,
    WindowBoundsError,
    ZeroVarianceError,
)

NORMS = ("chebyshev", "euclidean")


def _check_norm(norm: str) -> None:
    if norm not in NORMS:
        raise ValueError(f"unknown norm {norm!r}; expected one of {NORMS}")


def distances_to(points: np.ndarray, query: np.ndarray, norm: str = "chebyshev") -> np.ndarray:
    """Distances from one point to every row of ``points``."""
    diff = np.abs(points - query)
    if norm == "chebyshev":
        return diff.max(axis=1)
    return np.sqrt((diff * diff).sum(axis=1))


@dataclass(frozen=True)
class TimeSeries:
    """Uniformly sampled scalar signal.

    Parameters
    ----------
    samples : array-like of float
        Signal values, finite, at least one sample.
    sampling_rate : float
        Samples per second; 1.0 for map data indexed per iteration.
    """

    samples: np.ndarray
    sampling_rate: float = 1.0

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim != 1:
            raise ValueError(f"samples must be 1-D, got shape {samples.shape}")
        if samples.size == 0:
            raise ValueError("samples must be non-empty")
        if not np.all(np.isfinite(samples)):
            raise ValueError("samples must be finite")
        if not (self.sampling_rate > 0):
            raise ValueError(f"sampling_rate must be positive, got {self.sampling_rate}")
        samples = samples.copy()
        samples.flags.writeable = False
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "sampling_rate", float(self.sampling_rate))

    def __len__(self) -> int:
        return int(self.samples.size)

    @property
    def duration(self) -> float:
        return len(self) / self.sampling_rate


@dataclass(frozen=True)
class WindowSpec:
    """Half-open sample window ``[onset, offset)`` tagged with a trial identity.

    ``label`` is +1 or -1; windows may have any positive length, so trials of
    different durations coexist in one corpus.
    """

    onset: int
    offset: int
    label: int
    trial_id: str

    def __post_init__(self):
        if self.onset < 0 or self.offset <= self.onset:
            raise ValueError(
                f"window must satisfy 0 <= onset < offset, got [{self.onset}, {self.offset})"
            )
        if self.label not in (-1, 1):
            raise ValueError(f"label must be +1 or -1, got {self.label}")

    def __len__(self) -> int:
        return self.offset - self.onset


@dataclass(frozen=True)
class DelayEmbedding:
    """Delay-coordinate reconstruction of a scalar series.

    ``points[i, j] = samples[i + j * lag]`` for ``i in range(count)`` with
    ``count = len(samples) - (dimension - 1) * lag``.
    """

    points: np.ndarray
    dimension: int
    lag: int

    def __post_init__(self):
        points = np.asarray(self.points, dtype=np.float64)
        points = points.copy()
        points.flags.writeable = False
        object.__setattr__(self, "points", points)

    def __len__(self) -> int:
        return int(self.points.shape[0])

    @property
    def diameter(self) -> float:
        """Chebyshev diameter of the point set (max coordinate range)."""
        return float((self.points.max(axis=0) - self.points.min(axis=0)).max())


def delay_embed(series: TimeSeries, dimension: int, lag: int) -> DelayEmbedding:
    """Embed a scalar series in delay coordinates.

    Parameters
    ----------
    series : TimeSeries
    dimension : int
        Embedding dimension m >= 1.
    lag : int
        Delay in samples, >= 1.

    Returns
    -------
    DelayEmbedding
        ``len(series) - (dimension - 1) * lag`` points of size ``dimension``.

    Raises
    ------
    InsufficientLengthError
        If fewer than two embedded points would remain.
    """
    if dimension < 1:
        raise ValueError(f"dimension must be >= 1, got {dimension}")
    if lag < 1:
        raise ValueError(f"lag must be >= 1, got {lag}")
    n = len(series)
    count = n - (dimension - 1) * lag
    if count < 2:
        needed = (dimension - 1) * lag + 2
        raise InsufficientLengthError(
            f"insufficient length: {n} samples embed to {max(count, 0)} points "
            f"at dimension {dimension}, lag {lag}; need at least {needed} samples"
        )
    x = series.samples
    points = np.empty((count, dimension), dtype=np.float64)
    for j in range(dimension):
        points[:, j] = x[j * lag : j * lag + count]
    return DelayEmbedding(points=points, dimension=dimension, lag=lag)


def nearest_neighbor(
    embedding: DelayEmbedding,
    query_index: int,
    theiler: int = 0,
    norm: str = "chebyshev",
) -> tuple[int, float]:
    """Nearest neighbor of one embedded point under a Theiler exclusion.

    Only indices j with ``|j - query_index| > theiler`` are admissible (the
    query itself is always excluded). Ties break toward the smallest index.

    Returns
    -------
    (index, distance)

    Raises
    ------
    NoAdmissibleNeighborError
        If the exclusion window leaves no candidate.
    """
    _check_norm(norm)
    points = embedding.points
    n = points.shape[0]
    if not (0 <= query_index < n):
        raise IndexError(f"query_index {query_index} out of range for {n} points")
    if theiler < 0:
        raise ValueError(f"theiler must be >= 0, got {theiler}")
    lo, hi = query_index - theiler, query_index + theiler
    if lo <= 0 and hi >= n - 1:
        raise NoAdmissibleNeighborError(
            f"theiler window {theiler} excludes all {n - 1} candidate neighbors"
        )
    d = distances_to(points, points[query_index], norm)
    d[max(lo, 0) : min(hi, n - 1) + 1] = np.inf
    j = int(np.argmin(d))
    return j, float(d[j])


def all_nearest_neighbors(
    points: np.ndarray,
    theiler: int = 0,
    norm: str = "chebyshev",
) -> tuple[np.ndarray, np.ndarray]:
    """Nearest admissible neighbor of every row of ``points``.

    Same contract as :func:`nearest_neighbor` applied to each index: the
    exclusion window is ``|i - j| <= theiler`` and ties break toward the
    smallest index. Backed by a k-d tree but exactly equivalent to the
    exhaustive scan, ties included.

    Returns
    -------
    (indices, distances) : two arrays of length ``len(points)``
    """
    from scipy.spatial import cKDTree

    _check_norm(norm)
    points = np.ascontiguousarray(points, dtype=np.float64)
    n = points.shape[0]
    if theiler < 0:
        raise ValueError(f"theiler must be >= 0, got {theiler}")
    if n - 1 <= theiler:
        raise NoAdmissibleNeighborError(
            f"theiler window {theiler} excludes all neighbors for {n} points"
        )
    p = np.inf if norm == "chebyshev" else 2
    tree = cKDTree(points)
    nn_idx = np.full(n, -1, dtype=np.intp)
    nn_dist = np.full(n, np.inf)
    pending = np.arange(n)
    k = min(n, 2 * theiler + 2)
    while pending.size:
        raw_d, j = tree.query(points[pending], k=k, p=p)
        if k == 1:
            raw_d = raw_d[:, None]
            j = j[:, None]
        admissible = np.abs(j - pending[:, None]) > theiler
        d = np.where(admissible, raw_d, np.inf)
        best = d.min(axis=1)
        # smallest index among candidates tied at the minimum distance
        tied = np.where(d == best[:, None], j, n)
        best_j = tied.min(axis=1)
        found = np.isfinite(best)
        # a tie or the true neighbor may sit beyond the k returned candidates
        # whenever the farthest returned candidate is no farther than the best
        if k < n:
            truncated = raw_d[:, -1] <= best
        else:
            truncated = np.zeros(len(pending), dtype=bool)
        settle = found & ~truncated
        rows = pending[settle]
        nn_idx[rows] = best_j[settle]
        nn_dist[rows] = best[settle]
        pending = pending[~settle]
        if pending.size:
            if k == n:
                bad = int(pending[0])
                raise NoAdmissibleNeighborError(
                    f"theiler window {theiler} excludes all neighbors of index {bad}"
                )
            k = min(n, 2 * k)
    return nn_idx, nn_dist


def normalize(series: TimeSeries, mode: str = "zscore") -> TimeSeries:
    """Rescale a series to a canonical range.

    ``zscore`` maps to mean 0 and sample standard deviation 1 (ddof=1);
    ``minmax`` maps onto [0, 1] exactly.

    Raises
    ------
    ZeroVarianceError
        On a constant series, where neither mode is defined.
    """
    x = series.samples
    if mode == "zscore":
        mu = x.mean()
        sd = x.std(ddof=1) if x.size > 1 else 0.0
        if sd == 0.0:
            raise ZeroVarianceError("zero variance: cannot z-score a constant series")
        out = (x - mu) / sd
    elif mode == "minmax":
        lo, hi = x.min(), x.max()
        if hi == lo:
            raise ZeroVarianceError("zero variance: cannot min-max scale a constant series")
        out = (x - lo) / (hi - lo)
    else:
        raise ValueError(f"unknown mode {mode!r}; expected 'zscore' or 'minmax'")
    return TimeSeries(out, series.sampling_rate)


def slice_window(series: TimeSeries, window: WindowSpec) -> TimeSeries:
    """Extract the sub-series covered by ``window``; sampling rate carries over."""
    if window.offset > len(series):
        raise WindowBoundsError(
            f"window [{window.onset}, {window.offset}) exceeds series of {len(series)} samples"
        )
    return TimeSeries(series.samples[window.onset : window.offset], series.sampling_rate)


def default_theiler(sampling_rate: float, kind: str | None = None) -> int:
    """Default Theiler exclusion: 1 sample for maps, rate/10 for flows.

    ``kind`` forces 'map' or 'flow'; otherwise a unit sampling rate is read
    as map data.
    """
    if kind is None:
        kind = "map" if sampling_rate == 1.0 else "flow"
    if kind == "map":
        return 1
    if kind == "flow":
        return max(1, int(round(sampling_rate / 10.0)))
    raise ValueError(f"unknown kind {kind!r}; expected 'map' or 'flow'")
