"""Soft-margin SVM trained by sequential minimal optimization.

Pairs of dual variables are optimized analytically in deterministic
sweeps over every index pair until a sweep no longer improves the dual
objective. Training sets here are tiny (cluster centers), so sweeping
all pairs is both simple and effectively exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateTrainingError

KERNELS = ("linear", "rbf")


def default_gamma(X: np.ndarray) -> float:
    """Width heuristic: reciprocal of four times the mean feature variance."""
    v = float(np.mean(np.var(X, axis=0)))
    if v == 0.0:
        raise DegenerateTrainingError("degenerate training set")
    return 1.0 / (4.0 * v)


def kernel_matrix(kind: str, X: np.ndarray, Z: np.ndarray, gamma: float | None):
    if kind == "linear":
        return X @ Z.T
    if kind == "rbf":
        sq = (
            np.sum(X * X, axis=1)[:, None]
            - 2.0 * (X @ Z.T)
            + np.sum(Z * Z, axis=1)[None, :]
        )
        return np.exp(-gamma * np.maximum(sq, 0.0))
    raise ValueError(f"kernel must be one of {KERNELS}, got {kind!r}")


@dataclass(frozen=True)
class SvmModel:
    """Dual solution bound to its training points."""

    alpha: np.ndarray
    bias: float
    points: np.ndarray
    labels: np.ndarray
    kernel: str
    gamma: float | None
    C: float

    def decision_function(self, Z) -> np.ndarray:
        Z = np.asarray(Z, dtype=np.float64)
        if Z.ndim != 2 or Z.shape[1] != self.points.shape[1]:
            raise ValueError(
                f"expected points with {self.points.shape[1]} features, "
                f"got shape {Z.shape}"
            )
        k = kernel_matrix(self.kernel, self.points, Z, self.gamma)
        return (self.alpha * self.labels) @ k + self.bias

    def predict(self, Z) -> np.ndarray:
        return np.where(self.decision_function(Z) >= 0.0, 1, -1)

    def dual_objective(self) -> float:
        k = kernel_matrix(self.kernel, self.points, self.points, self.gamma)
        q = (self.labels[:, None] * self.labels[None, :]) * k
        return float(self.alpha.sum() - 0.5 * self.alpha @ q @ self.alpha)


def svm_train(
    X,
    y,
    kernel: str = "rbf",
    C: float = 10.0,
    gamma: float | None = None,
    tol: float = 1e-6,
    max_sweeps: int = 1000,
) -> SvmModel:
    """Fit the soft-margin dual on labeled points.

    The bias comes from averaging the margin condition over unbounded
    support vectors, or from the midpoint of the feasible interval when
    every vector is at a bound.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    if X.ndim != 2 or X.shape[0] < 2:
        raise ValueError(f"X must be 2-D with >= 2 rows, got shape {X.shape}")
    if y.shape != (X.shape[0],):
        raise ValueError("y must be one label per row")
    if not np.isin(y, (-1, 1)).all():
        raise ValueError("labels must be +1 or -1")
    if not ((y == 1).any() and (y == -1).any()):
        raise ValueError("both classes required among the training points")
    if C <= 0:
        raise ValueError(f"C must be > 0, got {C}")
    if kernel not in KERNELS:
        raise ValueError(f"kernel must be one of {KERNELS}, got {kernel!r}")
    if np.all(X == X[0]):
        raise DegenerateTrainingError("degenerate training set")
    if kernel == "rbf" and gamma is None:
        gamma = default_gamma(X)

    n = X.shape[0]
    yf = y.astype(np.float64)
    k = kernel_matrix(kernel, X, X, gamma)
    q = (yf[:, None] * yf[None, :]) * k
    alpha = np.zeros(n)
    f = np.zeros(n)  # decision values without bias: sum_j alpha_j y_j K_ij

    for _ in range(max_sweeps):
        moved = 0.0
        for i in range(n - 1):
            for j in range(i + 1, n):
                s = yf[i] * yf[j]
                if s < 0.0:
                    lo = max(0.0, alpha[j] - alpha[i])
                    hi = min(C, C + alpha[j] - alpha[i])
                else:
                    lo = max(0.0, alpha[i] + alpha[j] - C)
                    hi = min(C, alpha[i] + alpha[j])
                if lo >= hi:
                    continue
                eta = k[i, i] + k[j, j] - 2.0 * k[i, j]
                e_diff = (f[i] - yf[i]) - (f[j] - yf[j])
                if eta > 0.0:
                    a_j = alpha[j] + yf[j] * e_diff / eta
                    a_j = min(hi, max(lo, a_j))
                else:
                    # flat direction: the dual is linear along it, an
                    # endpoint is optimal
                    slope = yf[j] * e_diff
                    a_j = lo if slope < 0.0 else hi
                delta_j = a_j - alpha[j]
                if abs(delta_j) < 1e-14:
                    continue
                delta_i = -s * delta_j
                alpha[i] += delta_i
                alpha[j] += delta_j
                f += (delta_i * yf[i]) * k[i] + (delta_j * yf[j]) * k[j]
                moved = max(moved, abs(delta_j))
        if moved == 0.0:  # coordinate fixpoint: no pair can improve
            break

    free = (alpha > tol) & (alpha < C - tol)
    if free.any():
        bias = float(np.mean(yf[free] - f[free]))
    else:
        gap = yf - f
        lo_set = ((alpha < tol) & (yf > 0)) | ((alpha > C - tol) & (yf < 0))
        hi_set = ((alpha < tol) & (yf < 0)) | ((alpha > C - tol) & (yf > 0))
        lo = float(gap[lo_set].max()) if lo_set.any() else -np.inf
        hi = float(gap[hi_set].min()) if hi_set.any() else np.inf
        if np.isfinite(lo) and np.isfinite(hi):
            bias = (lo + hi) / 2.0
        elif np.isfinite(lo):
            bias = lo
        elif np.isfinite(hi):
            bias = hi
        else:
            bias = 0.0
    return SvmModel(
        alpha=alpha, bias=bias, points=X.copy(), labels=y.astype(np.int64),
        kernel=kernel, gamma=None if kernel == "linear" else float(gamma), C=float(C),
    )
