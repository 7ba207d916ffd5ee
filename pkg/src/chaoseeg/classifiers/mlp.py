"""Small feed-forward network for two-class feature vectors.

Fixed 4-3-1 architecture, hyperbolic tangent on both layers, trained
full-batch against +/-1 targets by nonlinear conjugate gradient.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_array, check_is_fitted

from ..errors import TrainingDivergedError

N_INPUT = 4
N_HIDDEN = 3

RESTART_EVERY = 20  # conjugate directions reset to steepest descent
ARMIJO_C = 1e-4
BACKTRACK = 0.5
MAX_BACKTRACKS = 60


def _canonical_order(X: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Row order independent of input permutation: features then label."""
    keys = (y,) + tuple(X[:, j] for j in reversed(range(X.shape[1])))
    return np.lexsort(keys)


def _unpack(w: np.ndarray):
    i = N_HIDDEN * N_INPUT
    w1 = w[:i].reshape(N_HIDDEN, N_INPUT)
    b1 = w[i : i + N_HIDDEN]
    w2 = w[i + N_HIDDEN : i + 2 * N_HIDDEN]
    b2 = w[i + 2 * N_HIDDEN]
    return w1, b1, w2, b2


def _loss_grad(w: np.ndarray, X: np.ndarray, y: np.ndarray):
    w1, b1, w2, b2 = _unpack(w)
    n = X.shape[0]
    hidden = np.tanh(X @ w1.T + b1)
    out = np.tanh(hidden @ w2 + b2)
    err = out - y
    loss = float(np.mean(err * err))
    d_out = (2.0 / n) * err * (1.0 - out * out)
    g_w2 = hidden.T @ d_out
    g_b2 = float(d_out.sum())
    d_hidden = d_out[:, None] * w2[None, :] * (1.0 - hidden * hidden)
    g_w1 = d_hidden.T @ X
    g_b1 = d_hidden.sum(axis=0)
    grad = np.concatenate([g_w1.ravel(), g_b1, g_w2, [g_b2]])
    return loss, grad


def loss_and_gradient(weights, X, y):
    """Mean squared error of the packed-weight network and its gradient.

    Exposed so the analytic gradient can be checked against finite
    differences on arbitrary weight vectors.
    """
    w = np.asarray(weights, dtype=np.float64)
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if w.shape != (N_HIDDEN * N_INPUT + 2 * N_HIDDEN + 1,):
        raise ValueError(f"expected {N_HIDDEN * N_INPUT + 2 * N_HIDDEN + 1} weights")
    return _loss_grad(w, X, y)


def initial_weights(seed: int) -> np.ndarray:
    """Seeded uniform init scaled by fan-in/fan-out; biases start at zero."""
    rng = np.random.default_rng(seed)
    lim1 = np.sqrt(6.0 / (N_INPUT + N_HIDDEN))
    lim2 = np.sqrt(6.0 / (N_HIDDEN + 1))
    w1 = rng.uniform(-lim1, lim1, size=(N_HIDDEN, N_INPUT))
    w2 = rng.uniform(-lim2, lim2, size=N_HIDDEN)
    return np.concatenate([w1.ravel(), np.zeros(N_HIDDEN), w2, [0.0]])


class MlpClassifier(BaseEstimator, ClassifierMixin):
    """4-3-1 tanh network trained by Polak-Ribiere conjugate gradient.

    Full-batch training with an Armijo backtracking line search; the
    conjugate coefficient is clamped at zero and directions restart to
    steepest descent every RESTART_EVERY iterations or whenever a
    direction fails to descend. Training rows are canonically reordered
    first, so any permutation of the same data gives bit-identical
    weights for a given seed.
    """

    def __init__(self, max_iters: int = 2000, tol: float = 1e-6, seed: int = 0):
        self.max_iters = max_iters
        self.tol = tol
        self.seed = seed

    def fit(self, X, y):
        X = check_array(X, dtype=np.float64)
        y = np.asarray(y)
        if X.shape[1] != N_INPUT:
            raise ValueError(f"expected {N_INPUT} features, got {X.shape[1]}")
        if y.shape != (X.shape[0],):
            raise ValueError("y must be one label per row")
        if not np.isin(y, (-1, 1)).all():
            raise ValueError("labels must be +1 or -1")
        if not ((y == 1).any() and (y == -1).any()):
            raise ValueError("training data must contain both classes")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")
        order = _canonical_order(X, y)
        X = X[order]
        yf = y[order].astype(np.float64)

        w = initial_weights(self.seed)
        loss, grad = _loss_grad(w, X, yf)
        direction = -grad
        n_iter = 0
        for it in range(1, self.max_iters + 1):
            gnorm = float(np.linalg.norm(grad))
            if gnorm < self.tol:
                break
            descent = float(grad @ direction)
            if descent >= 0.0:
                direction = -grad
                descent = -gnorm * gnorm
            # backtracking line search (Armijo)
            alpha = 1.0
            for _ in range(MAX_BACKTRACKS):
                trial, _ = _loss_grad(w + alpha * direction, X, yf)
                if trial <= loss + ARMIJO_C * alpha * descent:
                    break
                alpha *= BACKTRACK
            else:
                if np.array_equal(direction, -grad):
                    break  # no descent along the gradient: converged
                direction = -grad
                continue
            w = w + alpha * direction
            new_loss, new_grad = _loss_grad(w, X, yf)
            n_iter = it
            if not np.isfinite(new_loss) or not np.all(np.isfinite(new_grad)):
                raise TrainingDivergedError("training loss became non-finite", it)
            beta = float(new_grad @ (new_grad - grad)) / (gnorm * gnorm)
            beta = max(0.0, beta)
            if it % RESTART_EVERY == 0:
                beta = 0.0
            direction = -new_grad + beta * direction
            loss, grad = new_loss, new_grad

        w1, b1, w2, b2 = _unpack(w)
        self.weights_hidden_ = w1
        self.bias_hidden_ = b1
        self.weights_output_ = w2
        self.bias_output_ = float(b2)
        self.loss_ = loss
        self.n_iter_ = n_iter
        self.n_features_in_ = N_INPUT
        self.classes_ = np.array([-1, 1])
        return self

    def _packed(self) -> np.ndarray:
        return np.concatenate(
            [
                self.weights_hidden_.ravel(),
                self.bias_hidden_,
                self.weights_output_,
                [self.bias_output_],
            ]
        )

    def decision_function(self, X):
        check_is_fitted(self)
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != N_INPUT:
            raise ValueError(f"expected {N_INPUT} features, got {X.shape[1]}")
        hidden = np.tanh(X @ self.weights_hidden_.T + self.bias_hidden_)
        return np.tanh(hidden @ self.weights_output_ + self.bias_output_)

    def predict(self, X):
        raw = self.decision_function(X)
        return np.where(raw >= 0.0, 1, -1)

    def to_doc(self) -> dict:
        check_is_fitted(self)
        return {
            "architecture": [N_INPUT, N_HIDDEN, 1],
            "activation": "tanh",
            "weights_hidden": [[float(v) for v in row] for row in self.weights_hidden_],
            "bias_hidden": [float(v) for v in self.bias_hidden_],
            "weights_output": [float(v) for v in self.weights_output_],
            "bias_output": self.bias_output_,
            "config": {
                "max_iters": int(self.max_iters),
                "tol": float(self.tol),
                "seed": int(self.seed),
            },
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "MlpClassifier":
        cfg = doc["config"]
        model = cls(max_iters=cfg["max_iters"], tol=cfg["tol"], seed=cfg["seed"])
        model.weights_hidden_ = np.array(doc["weights_hidden"], dtype=np.float64)
        model.bias_hidden_ = np.array(doc["bias_hidden"], dtype=np.float64)
        model.weights_output_ = np.array(doc["weights_output"], dtype=np.float64)
        model.bias_output_ = float(doc["bias_output"])
        model.n_features_in_ = N_INPUT
        model.classes_ = np.array([-1, 1])
        model.loss_ = None
        model.n_iter_ = None
        return model
