"""Independent reference implementations used to validate the package.

Everything here is deliberately written from scratch along a different
code path than src/: tangent-space exponent integrators, brute-force
neighbor scans, exhaustive pair counting, an enumerative box-QP solver,
and finite-difference gradients. Slow and simple beats fast and shared.
"""

from __future__ import annotations

import itertools
import math

import numpy as np


def benettin_henon(a: float = 1.4, b: float = 0.3, n: int = 100_000,
                   transient: int = 1000) -> float:
    """Largest Lyapunov exponent of the Henon map via Jacobian products.

    Iterates the map alongside a tangent vector, renormalizing every
    step and averaging the log stretch. Independent of any delay
    embedding or neighbor search.
    """
    x, y = 0.0, 0.0
    for _ in range(transient):
        x, y = 1.0 - a * x * x + b * y, x
    v = np.array([1.0, 0.0])
    logsum = 0.0
    for _ in range(n):
        jac = np.array([[-2.0 * a * x, b], [1.0, 0.0]])
        v = jac @ v
        norm = math.hypot(v[0], v[1])
        logsum += math.log(norm)
        v /= norm
        x, y = 1.0 - a * x * x + b * y, x
    return logsum / n


def _lorenz_rhs(state, sigma, rho, beta):
    x, y, z = state
    return np.array([sigma * (y - x), x * (rho - z) - y, x * y - beta * z])


def _lorenz_jacobian(state, sigma, rho, beta):
    x, y, z = state
    return np.array([
        [-sigma, sigma, 0.0],
        [rho - z, -1.0, -x],
        [y, x, -beta],
    ])


def benettin_lorenz(sigma: float = 10.0, rho: float = 28.0,
                    beta: float = 8.0 / 3.0, dt: float = 0.01,
                    n: int = 100_000, transient: int = 5000) -> float:
    """Largest Lyapunov exponent of Lorenz via the variational equation.

    RK4 integrates state and tangent vector jointly; the tangent is
    renormalized each step.
    """
    def rhs(state, v):
        return (_lorenz_rhs(state, sigma, rho, beta),
                _lorenz_jacobian(state, sigma, rho, beta) @ v)

    state = np.array([1.0, 1.0, 1.0])
    v = np.array([1.0, 0.0, 0.0])

    def step(state, v):
        k1s, k1v = rhs(state, v)
        k2s, k2v = rhs(state + 0.5 * dt * k1s, v + 0.5 * dt * k1v)
        k3s, k3v = rhs(state + 0.5 * dt * k2s, v + 0.5 * dt * k2v)
        k4s, k4v = rhs(state + dt * k3s, v + dt * k3v)
        return (state + dt * (k1s + 2 * k2s + 2 * k3s + k4s) / 6.0,
                v + dt * (k1v + 2 * k2v + 2 * k3v + k4v) / 6.0)

    for _ in range(transient):
        state, v = step(state, v)
        v /= np.linalg.norm(v)
    logsum = 0.0
    for _ in range(n):
        state, v = step(state, v)
        norm = np.linalg.norm(v)
        logsum += math.log(norm)
        v /= norm
    return logsum / (n * dt)


def nn_scan(points: np.ndarray, i: int, theiler: int = 0,
            norm: str = "chebyshev") -> tuple[int, float]:
    """Nearest neighbor of row i by a plain double loop."""
    best_j, best_d = -1, math.inf
    for j in range(len(points)):
        if abs(j - i) <= theiler:
            continue
        diff = points[j] - points[i]
        if norm == "chebyshev":
            d = float(np.max(np.abs(diff)))
        else:
            d = float(np.sqrt(np.sum(diff * diff)))
        if d < best_d:
            best_d, best_j = d, j
    return best_j, best_d


def correlation_sums_exhaustive(points: np.ndarray, radii: np.ndarray,
                                theiler: int = 0,
                                norm: str = "chebyshev") -> np.ndarray:
    """C(eps) for each radius by direct pair enumeration."""
    n = len(points)
    counts = np.zeros(len(radii), dtype=np.int64)
    total = 0
    for i in range(n):
        for j in range(i + 1, n):
            if j - i <= theiler:
                continue
            total += 1
            diff = points[j] - points[i]
            if norm == "chebyshev":
                d = float(np.max(np.abs(diff)))
            else:
                d = float(np.sqrt(np.sum(diff * diff)))
            counts += d <= radii
    if total == 0:
        raise ValueError("no admissible pairs")
    return counts / total


# Reproduces the frozen Henon reference slope used in the acceptance
# tests. Exhaustive pair counting at N=20000 takes minutes in pure
# Python, so the reference run used the vectorized counting below with
# a hand-read scaling band; the band itself is the manual step.
HENON_D2_BAND = (3e-3, 3e-1)
HENON_D2_REFERENCE = 1.2050


def henon_d2_bruteforce(n: int = 20_000, n_radii: int = 13) -> float:
    """Correlation-dimension slope for Henon, fit over a hand-read band.

    Counts all pairs directly per radius (no cumulative or sorted
    shortcuts) and least-squares fits log C against log eps across
    HENON_D2_BAND, a band read off the curve by eye once. Slow: seconds.
    """
    a, b = 1.4, 0.3
    x, y = 0.0, 0.0
    for _ in range(1000):
        x, y = 1.0 - a * x * x + b * y, x
    series = np.empty(n + 1)
    for i in range(n + 1):
        series[i] = x
        x, y = 1.0 - a * x * x + b * y, x
    pts = np.column_stack([series[:-1], series[1:]])
    radii = np.geomspace(HENON_D2_BAND[0], HENON_D2_BAND[1], n_radii)
    m = len(pts)
    counts = np.zeros(n_radii, dtype=np.int64)
    total = 0
    for i in range(m - 1):
        d = np.max(np.abs(pts[i + 1:] - pts[i]), axis=1)
        counts += (d[None, :] <= radii[:, None]).sum(axis=1)
        total += m - 1 - i
    corr = counts / total
    slope = np.polyfit(np.log(radii), np.log(corr), 1)[0]
    return float(slope)


def qp_dual_exhaustive(kernel: np.ndarray, y: np.ndarray,
                       c_box: float) -> tuple[np.ndarray, float]:
    """Global maximum of the SVM dual by enumerating active sets.

    max  sum(a) - 0.5 a^T Q a   with Q = yy^T * K
    s.t. y^T a = 0,  0 <= a <= C

    Every face of the box is tried: each index is pinned at 0, pinned
    at C, or left free; free coordinates solve the stationarity system
    on that face. Feasible candidates are scored and the best kept.
    Only viable for a handful of points (3^n patterns).
    """
    n = len(y)
    if n > 10:
        raise ValueError("exhaustive oracle limited to small instances")
    q = np.outer(y, y) * kernel
    best_alpha, best_obj = None, -math.inf

    def objective(alpha):
        return float(alpha.sum() - 0.5 * alpha @ q @ alpha)

    for pattern in itertools.product((0, 1, 2), repeat=n):
        pat = np.array(pattern)
        free = np.where(pat == 2)[0]
        alpha = np.where(pat == 1, c_box, 0.0)
        if len(free) == 0:
            if abs(float(y @ alpha)) > 1e-9 * max(c_box, 1.0):
                continue
        else:
            k = len(free)
            sys_a = np.zeros((k + 1, k + 1))
            sys_a[:k, :k] = q[np.ix_(free, free)]
            sys_a[:k, k] = y[free]
            sys_a[k, :k] = y[free]
            fixed = alpha.copy()
            fixed[free] = 0.0
            rhs = np.empty(k + 1)
            rhs[:k] = 1.0 - q[np.ix_(free, np.arange(n))] @ fixed
            rhs[k] = -float(y @ fixed)
            sol, *_ = np.linalg.lstsq(sys_a, rhs, rcond=None)
            if not np.all(np.isfinite(sol)):
                continue
            alpha[free] = sol[:k]
            if np.any(alpha[free] < -1e-9) or np.any(alpha[free] > c_box + 1e-9):
                continue
            if abs(float(y @ alpha)) > 1e-7 * max(c_box, 1.0):
                continue
        alpha = np.clip(alpha, 0.0, c_box)
        obj = objective(alpha)
        if obj > best_obj:
            best_obj, best_alpha = obj, alpha.copy()
    return best_alpha, best_obj


def qp_dual_cvxopt(kernel: np.ndarray, y: np.ndarray,
                   c_box: float) -> tuple[np.ndarray, float]:
    """SVM dual via cvxopt's interior-point QP, tightened tolerances.

    A tiny ridge keeps the Hessian positive definite when the kernel
    matrix is singular; at 1e-12 it perturbs the objective far below
    the comparison tolerance.
    """
    from cvxopt import matrix, solvers

    n = len(y)
    q = np.outer(y, y) * kernel + 1e-12 * np.eye(n)
    g = np.vstack([-np.eye(n), np.eye(n)])
    h = np.concatenate([np.zeros(n), np.full(n, c_box)])
    opts = {"show_progress": False, "abstol": 1e-10, "reltol": 1e-10,
            "feastol": 1e-10}
    sol = solvers.qp(
        matrix(q), matrix(-np.ones(n)), matrix(g), matrix(h),
        matrix(y.astype(float), (1, n)), matrix(0.0), options=opts,
    )
    alpha = np.array(sol["x"]).ravel()
    q_true = np.outer(y, y) * kernel
    obj = float(alpha.sum() - 0.5 * alpha @ q_true @ alpha)
    return alpha, obj


def fd_gradient(func, w: np.ndarray, h: float = 1e-6) -> np.ndarray:
    """Central finite-difference gradient of a scalar function."""
    grad = np.empty_like(w)
    for i in range(len(w)):
        wp, wm = w.copy(), w.copy()
        wp[i] += h
        wm[i] -= h
        grad[i] = (func(wp) - func(wm)) / (2.0 * h)
    return grad
