"""Reference classifiers and evaluation utilities."""

from .hybrid import KMeansSvmClassifier
from .kmeans import KMeansResult, kmeans, kmeans_fit, kmeans_fit_total
from .metrics import EvalReport, evaluate
from .mlp import MlpClassifier, initial_weights, loss_and_gradient
from .svm import SvmModel, default_gamma, kernel_matrix, svm_train

__all__ = [
    "EvalReport",
    "KMeansResult",
    "KMeansSvmClassifier",
    "MlpClassifier",
    "SvmModel",
    "default_gamma",
    "evaluate",
    "initial_weights",
    "kernel_matrix",
    "kmeans",
    "kmeans_fit",
    "kmeans_fit_total",
    "loss_and_gradient",
    "svm_train",
]
