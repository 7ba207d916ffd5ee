"""Two-class evaluation: confusion matrix, accuracy, squared-error score."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

CLASS_ORDER = (1, -1)


@dataclass(frozen=True)
class EvalReport:
    """Confusion counts with rows = decided class, columns = real class.

    Row/column order is (+1, -1). ``mse`` is the mean squared difference
    between the +/-1 label encodings: exactly 4 * errors / n, which is
    4 * (1 - accuracy) up to one rounding.
    """

    confusion: np.ndarray
    accuracy: float
    mse: float
    n_test: int

    def accuracy_percent(self) -> str:
        return f"{100.0 * self.accuracy:.1f}%"

    def mse_rendered(self) -> str:
        return f"{self.mse:.4f}"


def _as_labels(a, name: str) -> np.ndarray:
    arr = np.asarray(a)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be 1-D, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError(f"{name} must be non-empty")
    if not np.isin(arr, (-1, 1)).all():
        raise ValueError(f"{name} must contain only +1 and -1")
    return arr.astype(np.int64)


def evaluate(predicted, actual) -> EvalReport:
    """Score decided labels against real ones.

    confusion[i, j] counts samples decided as CLASS_ORDER[i] whose real
    class is CLASS_ORDER[j]; accuracy is the diagonal fraction.
    """
    pred = _as_labels(predicted, "predicted")
    act = _as_labels(actual, "actual")
    if pred.size != act.size:
        raise ValueError(
            f"length mismatch: {pred.size} predictions vs {act.size} labels"
        )
    n = pred.size
    confusion = np.zeros((2, 2), dtype=np.int64)
    for i, decided in enumerate(CLASS_ORDER):
        for j, real in enumerate(CLASS_ORDER):
            confusion[i, j] = int(np.sum((pred == decided) & (act == real)))
    accuracy = float(np.trace(confusion)) / n
    mse = float(np.mean((act - pred) ** 2))
    return EvalReport(confusion=confusion, accuracy=accuracy, mse=mse, n_test=n)
