"""Synthetic test signals: chaotic maps, a chaotic flow, and stochastic controls.

Generation is bit-deterministic: a given :class:`SystemSpec` always produces
the same samples. Stochastic systems draw from numpy's PCG64 generator
(``np.random.default_rng``) seeded with the SystemSpec's integer seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DivergentTrajectoryError
from .timeseries import TimeSeries

SYSTEMS = ("logistic", "henon", "lorenz", "sine", "white_noise", "ar1")

# guard against runaway orbits from ill-chosen parameters
_DIVERGENCE_BOUND = 1e6


@dataclass(frozen=True)
class SystemSpec:
    """Recipe for one synthetic series.

    Parameters
    ----------
    name : str
        One of ``logistic, henon, lorenz, sine, white_noise, ar1``.
    n : int
        Samples to keep after the transient.
    params : dict
        Per-system parameters. Defaults when omitted:
        logistic ``r=4.0``; henon ``a=1.4, b=0.3``;
        lorenz ``sigma=10, rho=28, beta=8/3, dt=0.01``;
        sine ``period=64``; white_noise ``seed=0``; ar1 ``phi=0.9, seed=0``.
    x0 : float or tuple, optional
        Initial state. Defaults: logistic 0.3, henon (0, 0), lorenz (1, 1, 1).
    transient : int
        Leading samples discarded before the kept block.
    """

    name: str
    n: int
    params: dict = field(default_factory=dict)
    x0: object = None
    transient: int = 0

    def __post_init__(self):
        if self.name not in SYSTEMS:
            raise ValueError(f"unknown system {self.name!r}; expected one of {SYSTEMS}")
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.transient < 0:
            raise ValueError(f"transient must be >= 0, got {self.transient}")
        object.__setattr__(self, "params", dict(self.params))


def derivative_logistic(r: float) -> Callable[[float], float]:
    """Analytic derivative of the logistic map: x -> r - 2*r*x."""
    return lambda x: r - 2.0 * r * x


def _gen_logistic(spec: SystemSpec) -> tuple[np.ndarray, float]:
    r = float(spec.params.get("r", 4.0))
    if not (0.0 < r <= 4.0):
        raise ValueError(f"logistic r must lie in (0, 4], got {r}")
    x = 0.3 if spec.x0 is None else float(spec.x0)
    if not (0.0 < x < 1.0):
        raise ValueError(f"logistic x0 must lie in (0, 1), got {x}")
    total = spec.n + spec.transient
    out = np.empty(total)
    for i in range(total):
        out[i] = x
        x = r * x * (1.0 - x)
    return out, 1.0


def _gen_henon(spec: SystemSpec) -> tuple[np.ndarray, float]:
    a = float(spec.params.get("a", 1.4))
    b = float(spec.params.get("b", 0.3))
    if spec.x0 is None:
        x, y = 0.0, 0.0
    else:
        x, y = (float(v) for v in spec.x0)
    total = spec.n + spec.transient
    out = np.empty(total)
    for i in range(total):
        out[i] = x
        x, y = 1.0 - a * x * x + y, b * x
        if not (abs(x) < _DIVERGENCE_BOUND):
            raise DivergentTrajectoryError(f"henon orbit diverged at step {i + 1}")
    return out, 1.0


def _lorenz_rhs(x, y, z, sigma, rho, beta):
    return sigma * (y - x), x * (rho - z) - y, x * y - beta * z


def _gen_lorenz(spec: SystemSpec) -> tuple[np.ndarray, float]:
    p = spec.params
    sigma = float(p.get("sigma", 10.0))
    rho = float(p.get("rho", 28.0))
    beta = float(p.get("beta", 8.0 / 3.0))
    dt = float(p.get("dt", 0.01))
    if not (dt > 0):
        raise ValueError(f"lorenz dt must be positive, got {dt}")
    if spec.x0 is None:
        x, y, z = 1.0, 1.0, 1.0
    else:
        x, y, z = (float(v) for v in spec.x0)
    total = spec.n + spec.transient
    out = np.empty(total)
    h = dt
    for i in range(total):
        out[i] = x
        # fixed-step fourth-order Runge-Kutta
        k1x, k1y, k1z = _lorenz_rhs(x, y, z, sigma, rho, beta)
        k2x, k2y, k2z = _lorenz_rhs(
            x + 0.5 * h * k1x, y + 0.5 * h * k1y, z + 0.5 * h * k1z, sigma, rho, beta
        )
        k3x, k3y, k3z = _lorenz_rhs(
            x + 0.5 * h * k2x, y + 0.5 * h * k2y, z + 0.5 * h * k2z, sigma, rho, beta
        )
        k4x, k4y, k4z = _lorenz_rhs(
            x + h * k3x, y + h * k3y, z + h * k3z, sigma, rho, beta
        )
        x = x + (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        y = y + (h / 6.0) * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
        z = z + (h / 6.0) * (k1z + 2.0 * k2z + 2.0 * k3z + k4z)
        if not (abs(x) < _DIVERGENCE_BOUND and abs(y) < _DIVERGENCE_BOUND and abs(z) < _DIVERGENCE_BOUND):
            raise DivergentTrajectoryError(f"lorenz trajectory diverged at step {i + 1}")
    return out, 1.0 / dt


def _gen_sine(spec: SystemSpec) -> tuple[np.ndarray, float]:
    period = float(spec.params.get("period", 64.0))
    if not (period > 0):
        raise ValueError(f"sine period must be positive, got {period}")
    total = spec.n + spec.transient
    i = np.arange(total, dtype=np.float64)
    return np.sin(2.0 * math.pi * i / period), 1.0


def _gen_white_noise(spec: SystemSpec) -> tuple[np.ndarray, float]:
    seed = int(spec.params.get("seed", 0))
    rng = np.random.default_rng(seed)
    return rng.standard_normal(spec.n + spec.transient), 1.0


def _gen_ar1(spec: SystemSpec) -> tuple[np.ndarray, float]:
    phi = float(spec.params.get("phi", 0.9))
    if not (abs(phi) < 1.0):
        raise ValueError(f"ar1 phi must satisfy |phi| < 1 for stationarity, got {phi}")
    seed = int(spec.params.get("seed", 0))
    rng = np.random.default_rng(seed)
    total = spec.n + spec.transient
    eps = rng.standard_normal(total)
    out = np.empty(total)
    x = 0.0 if spec.x0 is None else float(spec.x0)
    for i in range(total):
        x = phi * x + eps[i]
        out[i] = x
    return out, 1.0


_GENERATORS = {
    "logistic": _gen_logistic,
    "henon": _gen_henon,
    "lorenz": _gen_lorenz,
    "sine": _gen_sine,
    "white_noise": _gen_white_noise,
    "ar1": _gen_ar1,
}


def generate(spec: SystemSpec) -> TimeSeries:
    """Generate the series described by ``spec``.

    Returns
    -------
    TimeSeries
        ``spec.n`` samples after discarding ``spec.transient``. Map and
        stochastic systems report sampling rate 1.0 (per iteration); the
        lorenz flow reports ``1/dt``.

    Raises
    ------
    ValueError
        On parameters outside their valid regime.
    DivergentTrajectoryError
        If the orbit becomes unbounded or non-finite, naming the step.
    """
    raw, rate = _GENERATORS[spec.name](spec)
    kept = raw[spec.transient :]
    bad = np.flatnonzero(~np.isfinite(kept))
    if bad.size:
        raise DivergentTrajectoryError(
            f"{spec.name} produced a non-finite sample at step {spec.transient + int(bad[0])}"
        )
    return TimeSeries(kept, sampling_rate=rate)
