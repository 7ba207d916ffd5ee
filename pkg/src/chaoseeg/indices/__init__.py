"""Chaos indices: Lyapunov exponents, mutual information, embedding
dimension, and correlation dimension."""

from .cao import DEFAULT_SATURATION_TOL, CaoResult, cao_embedding_dimension
from .dimension import GpResult, correlation_dimension, correlation_sum
from .information import (
    DEFAULT_BINS,
    LagSelectionWarning,
    MiEstimate,
    lag_mutual_information,
    mutual_information,
    select_lag,
    select_lag_from_curve,
)
from .lyapunov import WolfParams, largest_lyapunov_wolf, lyapunov_map_derivative

__all__ = [
    "DEFAULT_BINS",
    "DEFAULT_SATURATION_TOL",
    "CaoResult",
    "GpResult",
    "LagSelectionWarning",
    "MiEstimate",
    "WolfParams",
    "cao_embedding_dimension",
    "correlation_dimension",
    "correlation_sum",
    "lag_mutual_information",
    "largest_lyapunov_wolf",
    "lyapunov_map_derivative",
    "mutual_information",
    "select_lag",
    "select_lag_from_curve",
]
