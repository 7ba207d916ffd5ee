"""Per-window chaos-index features and their matrix assembly.

Each annotated window yields one four-component feature row: largest
Lyapunov exponent, mutual information at the selected delay, minimum
embedding dimension, and correlation dimension. Rows are grouped by
class into index-by-trial-by-class tensors for the classifiers and the
summary exports.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import ChaosEegError, ClassBalanceError
from .indices.cao import DEFAULT_SATURATION_TOL, cao_embedding_dimension
from .indices.dimension import DEFAULT_N_RADII, correlation_dimension
from .indices.information import (
    DEFAULT_BINS,
    LagSelectionWarning,
    lag_mutual_information,
    select_lag_from_curve,
)
from .indices.lyapunov import WolfParams, largest_lyapunov_wolf
from .timeseries import TimeSeries, WindowSpec, slice_window

FEATURE_NAMES = ("lle", "mi", "med", "d2")
CLASS_ORDER = (1, -1)

DEFAULT_MAX_LAG = 20
DEFAULT_M_MAX = 8


def trial_sort_key(trial_id: str):
    """Numeric ids sort numerically, everything else lexicographically after."""
    tid = str(trial_id)
    if tid.isdigit():
        return (0, int(tid), tid)
    return (1, 0, tid)


@dataclass(frozen=True)
class IndexParams:
    """Tunables for the four per-window indices.

    ``unsaturated`` decides what happens when the embedding-dimension
    search never settles below ``m_max``: "max" records m_max and keeps
    the trial, "skip" drops it with a reason. ``lag`` fixes the delay
    for every window; leave it None to re-select per window from the
    mutual-information curve (map data is usually best served by a
    fixed lag of 1).
    """

    bins: int = DEFAULT_BINS
    lag: int | None = None
    max_lag: int = DEFAULT_MAX_LAG
    m_max: int = DEFAULT_M_MAX
    saturation_tol: float = DEFAULT_SATURATION_TOL
    unsaturated: str = "max"
    n_radii: int = DEFAULT_N_RADII
    theiler: int | None = None
    norm: str = "chebyshev"
    evolve_steps: int | None = None
    eps_min: float | None = None
    eps_max: float | None = None

    def __post_init__(self):
        if self.unsaturated not in ("max", "skip"):
            raise ValueError(
                f"unsaturated must be 'max' or 'skip', got {self.unsaturated!r}"
            )
        if self.max_lag < 1:
            raise ValueError(f"max_lag must be >= 1, got {self.max_lag}")
        if self.lag is not None and self.lag < 1:
            raise ValueError(f"lag must be >= 1, got {self.lag}")


@dataclass(frozen=True)
class FeatureVector:
    """One window's four indices plus its identity."""

    trial_id: str
    label: int
    lle: float
    mi: float
    med: float
    d2: float

    def __post_init__(self):
        if self.label not in (-1, 1):
            raise ValueError(f"label must be +1 or -1, got {self.label}")
        vals = (self.lle, self.mi, self.med, self.d2)
        if not all(np.isfinite(v) for v in vals):
            raise ValueError(f"feature values must be finite, got {vals}")

    @property
    def values(self) -> np.ndarray:
        return np.array([self.lle, self.mi, self.med, self.d2], dtype=np.float64)


@dataclass(frozen=True)
class SkippedTrial:
    trial_id: str
    reason: str


@dataclass(frozen=True)
class ExtractionResult:
    """Feature vectors ordered by trial id, plus the trials that failed."""

    vectors: tuple[FeatureVector, ...]
    skipped: tuple[SkippedTrial, ...]

    def __iter__(self) -> Iterator[FeatureVector]:
        return iter(self.vectors)

    def __len__(self) -> int:
        return len(self.vectors)

    def __getitem__(self, i) -> FeatureVector:
        return self.vectors[i]


def _window_features(
    segment: TimeSeries, window: WindowSpec, params: IndexParams
) -> FeatureVector:
    if params.lag is not None:
        lag = params.lag
        mi_curve = lag_mutual_information(segment, lag, bins=params.bins)
    else:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", LagSelectionWarning)
            mi_curve = lag_mutual_information(segment, params.max_lag, bins=params.bins)
            lag, _ = select_lag_from_curve(mi_curve)
    cao = cao_embedding_dimension(
        segment,
        lag,
        params.m_max,
        saturation_tol=params.saturation_tol,
        theiler=params.theiler,
    )
    if cao.minimum_dim is not None:
        med = cao.minimum_dim
    elif params.unsaturated == "max":
        med = params.m_max
    else:
        raise ChaosEegError(
            f"embedding dimension not saturated within m_max={params.m_max}"
        )
    lle = largest_lyapunov_wolf(
        segment,
        WolfParams(
            m=med,
            t=lag,
            theiler=params.theiler,
            evolve_steps=params.evolve_steps,
            eps_min=params.eps_min,
            eps_max=params.eps_max,
        ),
        norm=params.norm,
    )
    gp = correlation_dimension(
        segment,
        m=med,
        lag=lag,
        n_radii=params.n_radii,
        theiler=params.theiler,
        norm=params.norm,
    )
    return FeatureVector(
        trial_id=str(window.trial_id),
        label=window.label,
        lle=lle,
        mi=float(mi_curve[lag]),
        med=float(med),
        d2=gp.d2,
    )


def extract_features(
    series: TimeSeries,
    windows: Sequence[WindowSpec],
    params: IndexParams | None = None,
) -> ExtractionResult:
    """Compute the four indices for every window of one series.

    Windows that cannot be processed (out of bounds, too short to embed,
    no neighbors, unsaturated under the "skip" policy, ...) are recorded
    with their reason instead of aborting the run. Output order follows
    trial id regardless of input order, so concurrent or reordered
    processing cannot change the result.
    """
    if params is None:
        params = IndexParams()
    seen: set[str] = set()
    for w in windows:
        tid = str(w.trial_id)
        if tid in seen:
            raise ValueError(f"duplicate trial_id {tid!r}")
        seen.add(tid)
    vectors = []
    skipped = []
    for w in sorted(windows, key=lambda w: trial_sort_key(w.trial_id)):
        try:
            segment = slice_window(series, w)
            vectors.append(_window_features(segment, w, params))
        except (ChaosEegError, ValueError) as exc:
            skipped.append(SkippedTrial(trial_id=str(w.trial_id), reason=str(exc)))
    return ExtractionResult(vectors=tuple(vectors), skipped=tuple(skipped))


def group_by_class(
    vectors: Sequence[FeatureVector],
) -> dict[int, list[FeatureVector]]:
    """Split vectors by label, each class sorted by trial id."""
    groups: dict[int, list[FeatureVector]] = {1: [], -1: []}
    for v in vectors:
        groups[v.label].append(v)
    for label in groups:
        groups[label].sort(key=lambda v: trial_sort_key(v.trial_id))
    return groups


@dataclass(frozen=True)
class FeatureMatrix:
    """Index-by-trial-by-class tensor with aligned trial ids.

    ``features[i, j, c]`` is feature i of trial j in class c, classes
    ordered (+1, -1); ``trial_ids[c]`` names the trials of class c in
    the same order as axis 1.
    """

    features: np.ndarray
    trial_ids: tuple[tuple[str, ...], tuple[str, ...]]

    def __post_init__(self):
        f = np.asarray(self.features, dtype=np.float64)
        if f.ndim != 3 or f.shape[0] != len(FEATURE_NAMES) or f.shape[2] != 2:
            raise ValueError(
                f"features must be shaped 4 x n x 2, got {f.shape}"
            )
        if not np.all(np.isfinite(f)):
            raise ValueError("features must be finite")
        n = f.shape[1]
        if any(len(ids) != n for ids in self.trial_ids):
            raise ValueError("trial_ids must align with the trial axis")
        object.__setattr__(self, "features", f)

    @property
    def n_trials(self) -> int:
        return self.features.shape[1]

    @classmethod
    def from_vectors(cls, vectors: Sequence[FeatureVector]) -> "FeatureMatrix":
        groups = group_by_class(vectors)
        n_pos, n_neg = len(groups[1]), len(groups[-1])
        if n_pos != n_neg:
            raise ClassBalanceError(
                f"class imbalance: {n_pos} trials for class +1 vs {n_neg} for class -1"
            )
        f = np.empty((len(FEATURE_NAMES), n_pos, 2), dtype=np.float64)
        for c, label in enumerate(CLASS_ORDER):
            for j, v in enumerate(groups[label]):
                f[:, j, c] = v.values
        return cls(
            features=f,
            trial_ids=(
                tuple(v.trial_id for v in groups[1]),
                tuple(v.trial_id for v in groups[-1]),
            ),
        )

    def to_vectors(self) -> list[FeatureVector]:
        """Inverse of from_vectors: the exact rows, class +1 block first."""
        out = []
        for c, label in enumerate(CLASS_ORDER):
            for j, tid in enumerate(self.trial_ids[c]):
                lle, mi, med, d2 = self.features[:, j, c]
                out.append(
                    FeatureVector(
                        trial_id=tid, label=label, lle=lle, mi=mi, med=med, d2=d2
                    )
                )
        return out

    def to_samples(self) -> tuple[np.ndarray, np.ndarray]:
        """Flatten to a (2n, 4) sample matrix and a +/-1 label vector."""
        n = self.n_trials
        x = np.empty((2 * n, len(FEATURE_NAMES)), dtype=np.float64)
        y = np.empty(2 * n, dtype=np.int64)
        for c, label in enumerate(CLASS_ORDER):
            x[c * n : (c + 1) * n] = self.features[:, :, c].T
            y[c * n : (c + 1) * n] = label
        return x, y


def build_matrices(
    train: Sequence[FeatureVector], test: Sequence[FeatureVector]
) -> tuple[FeatureMatrix, FeatureMatrix]:
    """Assemble balanced train and test tensors from labeled vectors."""
    train_groups = group_by_class(train)
    if not train_groups[1] or not train_groups[-1]:
        raise ClassBalanceError("training vectors must cover both classes")
    return FeatureMatrix.from_vectors(train), FeatureMatrix.from_vectors(test)


@dataclass(frozen=True)
class FeatureSummary:
    """Per-class per-feature mean and sample standard deviation."""

    means: np.ndarray  # (4, 2)
    stds: np.ndarray  # (4, 2)
    counts: tuple[int, int]
    degenerate: tuple[bool, bool]  # class had < 2 values: std 0 by convention

    def cell(self, feature: int, class_index: int) -> str:
        return (
            f"{self.means[feature, class_index]:.4f}"
            f" ({self.stds[feature, class_index]:.4f})"
        )

    def render(self) -> str:
        header = f"{'index':<8}{'class +1':<20}{'class -1':<20}"
        lines = [header, "-" * len(header)]
        for i, name in enumerate(FEATURE_NAMES):
            lines.append(f"{name:<8}{self.cell(i, 0):<20}{self.cell(i, 1):<20}")
        for c, label in enumerate(CLASS_ORDER):
            if self.degenerate[c]:
                lines.append(f"note: class {label:+d} has a single value, std = 0")
        return "\n".join(lines) + "\n"


def _class_values(vectors: Sequence[FeatureVector]) -> dict[int, np.ndarray]:
    groups = group_by_class(vectors)
    return {
        label: np.array([v.values for v in groups[label]], dtype=np.float64).reshape(
            -1, len(FEATURE_NAMES)
        )
        for label in CLASS_ORDER
    }


def summarize(vectors: Sequence[FeatureVector] | FeatureMatrix) -> FeatureSummary:
    """Mean and n-1 standard deviation per feature per class."""
    if isinstance(vectors, FeatureMatrix):
        vectors = vectors.to_vectors()
    if not len(vectors):
        raise ValueError("cannot summarize an empty feature set")
    values = _class_values(vectors)
    means = np.zeros((len(FEATURE_NAMES), 2))
    stds = np.zeros((len(FEATURE_NAMES), 2))
    degenerate = []
    counts = []
    for c, label in enumerate(CLASS_ORDER):
        rows = values[label]
        counts.append(rows.shape[0])
        degenerate.append(rows.shape[0] < 2)
        if rows.shape[0] == 0:
            continue
        means[:, c] = rows.mean(axis=0)
        if rows.shape[0] >= 2:
            stds[:, c] = rows.std(axis=0, ddof=1)
    return FeatureSummary(
        means=means,
        stds=stds,
        counts=(counts[0], counts[1]),
        degenerate=(degenerate[0], degenerate[1]),
    )


@dataclass(frozen=True)
class HistogramResult:
    """Relative class frequencies over a shared equidistant binning."""

    feature: str
    bin_centers: np.ndarray
    freq_pos: np.ndarray
    freq_neg: np.ndarray


def _feature_index(feature) -> int:
    if isinstance(feature, str):
        try:
            return FEATURE_NAMES.index(feature)
        except ValueError:
            raise ValueError(
                f"unknown feature {feature!r}, expected one of {FEATURE_NAMES}"
            ) from None
    i = int(feature)
    if not 0 <= i < len(FEATURE_NAMES):
        raise ValueError(f"feature index must be in [0, 3], got {i}")
    return i


def histogram(
    vectors: Sequence[FeatureVector] | FeatureMatrix, feature, bins: int
) -> HistogramResult:
    """Per-class relative frequency of one feature over the pooled range.

    Bins are equidistant over the pooled min..max of both classes;
    each class's counts divide by that class's trial count, so each
    present class sums to 1. An absent class yields a zero column.
    """
    if isinstance(vectors, FeatureMatrix):
        vectors = vectors.to_vectors()
    if bins < 2:
        raise ValueError(f"bins must be >= 2, got {bins}")
    if not len(vectors):
        raise ValueError("cannot histogram an empty feature set")
    i = _feature_index(feature)
    values = _class_values(vectors)
    pooled = np.concatenate([values[1][:, i], values[-1][:, i]])
    lo, hi = float(pooled.min()), float(pooled.max())
    if lo == hi:
        lo, hi = lo - 0.5, hi + 0.5  # zero-width range: center a unit span
    edges = np.linspace(lo, hi, bins + 1)
    freqs = []
    for label in CLASS_ORDER:
        col = values[label][:, i]
        if col.size == 0:
            freqs.append(np.zeros(bins))
            continue
        counts, _ = np.histogram(col, bins=edges)
        freqs.append(counts / col.size)
    return HistogramResult(
        feature=FEATURE_NAMES[i],
        bin_centers=(edges[:-1] + edges[1:]) / 2.0,
        freq_pos=freqs[0],
        freq_neg=freqs[1],
    )
