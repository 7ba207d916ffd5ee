"""Cluster-then-classify: k-means centers feeding an SVM.

Each class is condensed to a handful of cluster centers; the SVM is
then trained on those labeled centers only and test points take the
sign of its decision function.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .kmeans import kmeans_fit, kmeans_fit_total
from .svm import SvmModel, svm_train

CLUSTER_MODES = ("per-class", "total")


class KMeansSvmClassifier(BaseEstimator, ClassifierMixin):
    """Two-class classifier over k-means cluster centers.

    ``clusters`` picks how "k" is read: "per-class" (default) clusters
    each class separately into k_per_class centers; "total" clusters the
    pooled points into 2*k_per_class centers labeled by majority vote.
    """

    def __init__(
        self,
        k_per_class: int = 4,
        kernel: str = "rbf",
        C: float = 10.0,
        gamma: float | None = None,
        seed: int = 0,
        restarts: int = 10,
        max_iters: int = 300,
        clusters: str = "per-class",
    ):
        self.k_per_class = k_per_class
        self.kernel = kernel
        self.C = C
        self.gamma = gamma
        self.seed = seed
        self.restarts = restarts
        self.max_iters = max_iters
        self.clusters = clusters

    def fit(self, X, y):
        X = check_array(X, dtype=np.float64)
        y = np.asarray(y)
        if self.clusters not in CLUSTER_MODES:
            raise ValueError(
                f"clusters must be one of {CLUSTER_MODES}, got {self.clusters!r}"
            )
        if self.clusters == "per-class":
            centers, labels = kmeans_fit(
                X,
                y,
                k_per_class=self.k_per_class,
                seed=self.seed,
                restarts=self.restarts,
                max_iters=self.max_iters,
            )
        else:
            centers, labels = kmeans_fit_total(
                X,
                y,
                k_total=2 * self.k_per_class,
                seed=self.seed,
                restarts=self.restarts,
                max_iters=self.max_iters,
            )
        self.centers_ = centers
        self.center_labels_ = labels
        self.svm_ = svm_train(
            centers, labels, kernel=self.kernel, C=self.C, gamma=self.gamma
        )
        self.n_features_in_ = X.shape[1]
        self.classes_ = np.array([-1, 1])
        return self

    def decision_function(self, X):
        check_is_fitted(self)
        X = check_array(X, dtype=np.float64)
        return self.svm_.decision_function(X)

    def predict(self, X):
        return np.where(self.decision_function(X) >= 0.0, 1, -1)

    def to_doc(self) -> dict:
        check_is_fitted(self)
        svm = self.svm_
        return {
            "centers": [[float(v) for v in row] for row in self.centers_],
            "center_labels": [int(v) for v in self.center_labels_],
            "svm": {
                "alpha": [float(a) for a in svm.alpha],
                "bias": svm.bias,
                "kernel": svm.kernel,
                "gamma": svm.gamma,
                "C": svm.C,
            },
            "config": {
                "k_per_class": int(self.k_per_class),
                "kernel": self.kernel,
                "C": float(self.C),
                "gamma": None if self.gamma is None else float(self.gamma),
                "seed": int(self.seed),
                "restarts": int(self.restarts),
                "max_iters": int(self.max_iters),
                "clusters": self.clusters,
            },
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "KMeansSvmClassifier":
        cfg = doc["config"]
        model = cls(
            k_per_class=cfg["k_per_class"],
            kernel=cfg["kernel"],
            C=cfg["C"],
            gamma=cfg["gamma"],
            seed=cfg["seed"],
            restarts=cfg["restarts"],
            max_iters=cfg["max_iters"],
            clusters=cfg["clusters"],
        )
        centers = np.array(doc["centers"], dtype=np.float64)
        labels = np.array(doc["center_labels"], dtype=np.int64)
        svm = doc["svm"]
        model.centers_ = centers
        model.center_labels_ = labels
        model.svm_ = SvmModel(
            alpha=np.array(svm["alpha"], dtype=np.float64),
            bias=float(svm["bias"]),
            points=centers,
            labels=labels,
            kernel=svm["kernel"],
            gamma=None if svm["gamma"] is None else float(svm["gamma"]),
            C=float(svm["C"]),
        )
        model.n_features_in_ = centers.shape[1]
        model.classes_ = np.array([-1, 1])
        return model
