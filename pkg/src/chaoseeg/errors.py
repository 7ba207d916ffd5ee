"""Exception types raised across the toolkit."""

from __future__ import annotations


class ChaosEegError(Exception):
    """Base class for all toolkit errors."""


class InsufficientLengthError(ChaosEegError):
    """Series too short for the requested embedding or window."""


class NoAdmissibleNeighborError(ChaosEegError):
    """No neighbor survives the Theiler exclusion window."""


class ZeroVarianceError(ChaosEegError):
    """Constant input where a spread is required."""


class WindowBoundsError(ChaosEegError):
    """Window does not fit inside the series it is applied to."""


class SingularDerivativeError(ChaosEegError):
    """Map derivative vanished on the orbit; log-derivative undefined."""


class InsufficientDensityError(ChaosEegError):
    """Too many neighbor replacements failed during trajectory following."""


class DegenerateEmbeddingError(ChaosEegError):
    """Too many zero nearest-neighbor distances for a stable ratio statistic."""


class ScalingRegionError(ChaosEegError):
    """No usable scaling region in the correlation sums."""


class DivergentTrajectoryError(ChaosEegError):
    """Synthetic trajectory left its admissible region or became non-finite."""


class ClassBalanceError(ChaosEegError):
    """Class counts differ where balanced classes are required."""


class DegenerateTrainingError(ChaosEegError):
    """Training set carries no usable geometry (e.g. all points identical)."""


class TrainingDivergedError(ChaosEegError):
    """Optimization produced a non-finite loss."""

    def __init__(self, message: str, iteration: int | None = None):
        super().__init__(message)
        self.iteration = iteration


class FileFormatError(ChaosEegError):
    """Malformed input file; carries the offending line number when known."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
