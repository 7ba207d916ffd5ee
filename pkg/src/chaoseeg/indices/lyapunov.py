"""Largest Lyapunov exponent estimators.

Two independent routes are provided and deliberately kept separate:

* :func:`lyapunov_map_derivative` averages the log absolute derivative of a
  known 1-D map along an orbit.
* :func:`largest_lyapunov_wolf` follows a fiducial trajectory in a delay
  embedding, growing and renormalizing a neighbor separation.

Both return the exponent per sample (natural log); multiply by the sampling
rate for a per-second value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from ..errors import (
    InsufficientDensityError,
    InsufficientLengthError,
    NoAdmissibleNeighborError,
    SingularDerivativeError,
)
from ..timeseries import TimeSeries, default_theiler, delay_embed, distances_to

# neighbor separation bands as fractions of the embedded attractor diameter
DEFAULT_EPS_MIN_FRACTION = 0.001
DEFAULT_EPS_MAX_FRACTION = 0.1
MAP_EVOLVE_STEPS = 3
MAX_FLOW_EVOLVE_STEPS = 10


def lyapunov_map_derivative(series: TimeSeries, derivative) -> float:
    """Average log absolute derivative of a 1-D map along its orbit.

    Parameters
    ----------
    series : TimeSeries
        Orbit samples of the map.
    derivative : callable
        Analytic derivative of the map, applied per sample (vectorized
        callables are used as such).

    Raises
    ------
    SingularDerivativeError
        If the derivative vanishes anywhere on the orbit.
    """
    x = series.samples
    try:
        d = np.asarray(derivative(x), dtype=np.float64)
        if d.shape != x.shape:
            raise TypeError
    except TypeError:
        d = np.array([derivative(v) for v in x], dtype=np.float64)
    zero = np.flatnonzero(d == 0.0)
    if zero.size:
        raise SingularDerivativeError(
            f"singular derivative at step {int(zero[0])}; log growth undefined"
        )
    return float(np.mean(np.log(np.abs(d))))


@dataclass(frozen=True)
class WolfParams:
    """Controls for the trajectory-following exponent estimate.

    ``eps_min``/``eps_max`` bound admissible neighbor separations; ``None``
    resolves to 0.1% and 10% of the embedded attractor diameter. ``theiler``
    ``None`` resolves per the sampling rate (1 for maps, rate/10 for flows);
    ``evolve_steps`` ``None`` resolves to 3 for maps and
    ``round(0.1 * lag)`` clamped to [1, 10] for flows (10% of the lag read
    as a characteristic time).
    """

    m: int
    t: int
    theiler: int | None = None
    evolve_steps: int | None = None
    eps_min: float | None = None
    eps_max: float | None = None

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")
        if self.t < 1:
            raise ValueError(f"t must be >= 1, got {self.t}")
        if self.eps_min is not None and not (self.eps_min > 0):
            raise ValueError(f"eps_min must be positive, got {self.eps_min}")
        if (
            self.eps_min is not None
            and self.eps_max is not None
            and not (self.eps_min < self.eps_max)
        ):
            raise ValueError(
                f"need eps_min < eps_max, got {self.eps_min} >= {self.eps_max}"
            )

    def resolve(self, series: TimeSeries, diameter: float) -> "WolfParams":
        """Fill every ``None`` field for a concrete series."""
        theiler = self.theiler
        if theiler is None:
            theiler = default_theiler(series.sampling_rate)
        evolve = self.evolve_steps
        if evolve is None:
            if series.sampling_rate == 1.0:
                evolve = MAP_EVOLVE_STEPS
            else:
                evolve = min(MAX_FLOW_EVOLVE_STEPS, max(1, round(0.1 * self.t)))
        eps_min = self.eps_min
        eps_max = self.eps_max
        if eps_min is None:
            eps_min = DEFAULT_EPS_MIN_FRACTION * diameter
        if eps_max is None:
            eps_max = DEFAULT_EPS_MAX_FRACTION * diameter
        if not (0 < eps_min < eps_max):
            raise ValueError(
                f"resolved separation band is empty: eps_min={eps_min}, eps_max={eps_max}"
            )
        return replace(
            self, theiler=theiler, evolve_steps=evolve, eps_min=eps_min, eps_max=eps_max
        )


def _find_replacement(points, fid, v_old, eps_min, eps_max, theiler, horizon, norm):
    """Best-aligned admissible replacement neighbor, or None.

    Candidates must sit within [eps_min, eps_max] of the fiducial point,
    outside the Theiler window, and have ``horizon`` future samples left.
    Among them the one whose offset vector best aligns (max cosine) with the
    old separation vector wins; without a usable orientation the nearest
    wins. Ties break toward the smallest index.
    """
    n = points.shape[0]
    d = distances_to(points, points[fid], norm)
    idx = np.arange(n)
    ok = (
        (np.abs(idx - fid) > theiler)
        & (d >= eps_min)
        & (d <= eps_max)
        & (idx + horizon <= n - 1)
    )
    if not ok.any():
        return None
    cand = idx[ok]
    norm_old = math.sqrt(float(np.dot(v_old, v_old))) if v_old is not None else 0.0
    if norm_old == 0.0:
        return int(cand[np.argmin(d[ok])])
    offsets = points[cand] - points[fid]
    lengths = np.sqrt((offsets * offsets).sum(axis=1))
    cos = (offsets @ v_old) / (lengths * norm_old)
    return int(cand[np.argmax(cos)])


def largest_lyapunov_wolf(
    series: TimeSeries, params: WolfParams, norm: str = "chebyshev"
) -> float:
    """Largest Lyapunov exponent by trajectory following.

    Embeds the series, tracks the separation between a fiducial trajectory
    and its nearest admissible neighbor, accumulates ``ln(d_after/d_before)``
    every ``evolve_steps`` samples, and renormalizes by replacing the
    neighbor whenever the separation outgrows ``eps_max`` (or the neighbor
    runs out of future). The estimate is the accumulated sum over the total
    evolved samples: log growth per sample.

    Raises
    ------
    InsufficientLengthError
        If the embedding cannot evolve even once.
    NoAdmissibleNeighborError
        If the start point has no neighbor within ``eps_max``.
    InsufficientDensityError
        If more than half of the replacement searches fail.
    """
    embedding = delay_embed(series, params.m, params.t)
    points = embedding.points
    n = points.shape[0]
    p = params.resolve(series, embedding.diameter)
    k = p.evolve_steps
    if k < 1:
        raise ValueError(f"evolve_steps must be >= 1, got {k}")
    if k > n - 1:
        raise InsufficientLengthError(
            f"insufficient length: {n} embedded points cannot evolve {k} steps"
        )

    # start at the earliest fiducial whose nearest admissible neighbor
    # already sits inside the band; points on the attractor rim make
    # poor anchors and would otherwise abort the whole estimate
    idx = np.arange(n)
    fid = None
    nb = None
    nearest_seen = None
    for start in range(n - k):
        d0 = distances_to(points, points[start], norm)
        ok = (np.abs(idx - start) > p.theiler) & (d0 >= p.eps_min)
        if not ok.any():
            continue
        order = idx[ok]
        cand = int(order[np.argmin(d0[ok])])
        if nearest_seen is None or d0[cand] < nearest_seen:
            nearest_seen = float(d0[cand])
        if d0[cand] <= p.eps_max:
            fid, nb = start, cand
            break
    if fid is None:
        if nearest_seen is None:
            raise NoAdmissibleNeighborError(
                "no admissible start neighbor beyond the theiler window"
            )
        raise NoAdmissibleNeighborError(
            f"no start point with a neighbor inside [eps_min, eps_max]: "
            f"nearest admissible separation {nearest_seen:.6g} exceeds "
            f"eps_max {p.eps_max:.6g}"
        )

    logsum = 0.0
    steps = 0
    attempts = 0
    skips = 0
    while fid + k <= n - 1:
        if nb + k > n - 1:
            attempts += 1
            v_old = points[nb] - points[fid]
            new = _find_replacement(
                points, fid, v_old, p.eps_min, p.eps_max, p.theiler, k, norm
            )
            if new is None:
                skips += 1
                break
            nb = new
        d_before = float(distances_to(points[nb : nb + 1], points[fid], norm)[0])
        fid += k
        nb += k
        d_after = float(distances_to(points[nb : nb + 1], points[fid], norm)[0])
        degenerate = d_before == 0.0 or d_after == 0.0
        if not degenerate:
            logsum += math.log(d_after / d_before)
            steps += k
        if (d_after > p.eps_max or degenerate) and fid + k <= n - 1:
            attempts += 1
            v_old = points[nb] - points[fid]
            new = _find_replacement(
                points, fid, v_old, p.eps_min, p.eps_max, p.theiler, k, norm
            )
            if new is None:
                skips += 1
            else:
                nb = new
    if steps == 0:
        raise InsufficientLengthError(
            "insufficient length: no separation segment could be evolved"
        )
    if attempts > 0 and skips / attempts > 0.5:
        raise InsufficientDensityError(
            f"insufficient data density: {skips} of {attempts} neighbor replacements failed"
        )
    return logsum / steps
