"""Feature scaling and PCA conditioning.

Both operate on (n_samples, 4) sample matrices in the sklearn estimator
style and on the class-stacked feature tensors via thin wrappers. The
scaler learns its ranges on training data only; test values outside the
training range stay outside [0, 1] (no clipping).
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .errors import ZeroVarianceError
from .features import FEATURE_NAMES, FeatureMatrix

SCALER_MODES = ("minmax", "zscore")


class FeatureScaler(BaseEstimator, TransformerMixin):
    """Per-feature min-max or z-score scaling learned on training data.

    minmax maps the training range of each feature to [0, 1]; zscore
    centers on the training mean and divides by the population standard
    deviation. Both are exactly invertible.
    """

    def __init__(self, mode: str = "minmax"):
        self.mode = mode

    def fit(self, X, y=None):
        if self.mode not in SCALER_MODES:
            raise ValueError(f"mode must be one of {SCALER_MODES}, got {self.mode!r}")
        X = check_array(X, dtype=np.float64)
        self.n_features_in_ = X.shape[1]
        if self.mode == "minmax":
            self.min_ = X.min(axis=0)
            self.max_ = X.max(axis=0)
            span = self.max_ - self.min_
        else:
            self.mean_ = X.mean(axis=0)
            self.std_ = X.std(axis=0, ddof=0)
            span = self.std_
        flat = np.flatnonzero(span == 0)
        if flat.size:
            i = int(flat[0])
            name = FEATURE_NAMES[i] if X.shape[1] == len(FEATURE_NAMES) else str(i)
            raise ZeroVarianceError(f"constant feature {name}: cannot scale")
        return self

    def transform(self, X):
        check_is_fitted(self)
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"expected {self.n_features_in_} features, got {X.shape[1]}"
            )
        if self.mode == "minmax":
            return (X - self.min_) / (self.max_ - self.min_)
        return (X - self.mean_) / self.std_

    def inverse_transform(self, X):
        check_is_fitted(self)
        X = check_array(X, dtype=np.float64)
        if self.mode == "minmax":
            return X * (self.max_ - self.min_) + self.min_
        return X * self.std_ + self.mean_

    def to_doc(self) -> dict:
        check_is_fitted(self)
        doc = {"mode": self.mode, "n_features": int(self.n_features_in_)}
        if self.mode == "minmax":
            doc["min"] = [float(v) for v in self.min_]
            doc["max"] = [float(v) for v in self.max_]
        else:
            doc["mean"] = [float(v) for v in self.mean_]
            doc["std"] = [float(v) for v in self.std_]
        return doc

    @classmethod
    def from_doc(cls, doc: dict) -> "FeatureScaler":
        scaler = cls(mode=doc["mode"])
        scaler.n_features_in_ = int(doc["n_features"])
        if doc["mode"] == "minmax":
            scaler.min_ = np.array(doc["min"], dtype=np.float64)
            scaler.max_ = np.array(doc["max"], dtype=np.float64)
        else:
            scaler.mean_ = np.array(doc["mean"], dtype=np.float64)
            scaler.std_ = np.array(doc["std"], dtype=np.float64)
        return scaler


def fit_scaler(train: FeatureMatrix, mode: str = "minmax") -> FeatureScaler:
    x, _ = train.to_samples()
    return FeatureScaler(mode=mode).fit(x)


def apply_scaler(scaler: FeatureScaler, matrix: FeatureMatrix) -> FeatureMatrix:
    x, _ = matrix.to_samples()
    scaled = scaler.transform(x)
    n = matrix.n_trials
    f = np.empty_like(matrix.features)
    for c in range(2):
        f[:, :, c] = scaled[c * n : (c + 1) * n].T
    return FeatureMatrix(features=f, trial_ids=matrix.trial_ids)


class PcaConditioner(BaseEstimator, TransformerMixin):
    """Principal components of mean-centered samples via SVD.

    All components are kept at fit time, zero singular values included;
    ``n_components`` limits the projection only. Component signs follow
    the largest-magnitude coordinate so fits are reproducible.
    """

    def __init__(self, n_components: int | None = None):
        self.n_components = n_components

    def fit(self, X, y=None):
        X = check_array(X, dtype=np.float64)
        n, d = X.shape
        if n <= d:
            raise ValueError(f"need more than {d} samples to fit, got {n}")
        k = d if self.n_components is None else int(self.n_components)
        if not 1 <= k <= d:
            raise ValueError(f"n_components must be in [1, {d}], got {k}")
        self.mean_ = X.mean(axis=0)
        centered = X - self.mean_
        _, s, vt = np.linalg.svd(centered, full_matrices=False)
        # fix each component's sign by its largest-magnitude coordinate
        for i in range(vt.shape[0]):
            j = int(np.argmax(np.abs(vt[i])))
            if vt[i, j] < 0:
                vt[i] = -vt[i]
        self.components_ = vt
        self.singular_values_ = s
        self.n_features_in_ = d
        return self

    def transform(self, X, k: int | None = None):
        check_is_fitted(self)
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"expected {self.n_features_in_} features, got {X.shape[1]}"
            )
        if k is None:
            k = (
                self.n_features_in_
                if self.n_components is None
                else int(self.n_components)
            )
        if not 1 <= k <= self.n_features_in_:
            raise ValueError(
                f"k must be in [1, {self.n_features_in_}], got {k}"
            )
        return (X - self.mean_) @ self.components_[:k].T

    def inverse_transform(self, Z):
        check_is_fitted(self)
        Z = check_array(Z, dtype=np.float64)
        k = Z.shape[1]
        return Z @ self.components_[:k] + self.mean_


def pca_fit(train: FeatureMatrix) -> PcaConditioner:
    x, _ = train.to_samples()
    return PcaConditioner().fit(x)


def pca_transform(model: PcaConditioner, matrix: FeatureMatrix, k: int) -> np.ndarray:
    """Project a tensor's samples onto the top-k components.

    Returns a k x n_trials x 2 array laid out like the input tensor.
    """
    x, _ = matrix.to_samples()
    z = model.transform(x, k=k)
    n = matrix.n_trials
    out = np.empty((k, n, 2), dtype=np.float64)
    for c in range(2):
        out[:, :, c] = z[c * n : (c + 1) * n].T
    return out
