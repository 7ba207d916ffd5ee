"""chaoseeg: chaos indices of windowed time series, with feature scaling,
PCA conditioning, and two reference classifiers (an MLP and a k-means/SVM
hybrid), plus a CLI covering the whole pipeline."""

from .errors import (
    ChaosEegError,
    ClassBalanceError,
    DegenerateEmbeddingError,
    DegenerateTrainingError,
    DivergentTrajectoryError,
    FileFormatError,
    InsufficientDensityError,
    InsufficientLengthError,
    NoAdmissibleNeighborError,
    ScalingRegionError,
    SingularDerivativeError,
    TrainingDivergedError,
    WindowBoundsError,
    ZeroVarianceError,
)
from .indices import (
    CaoResult,
    GpResult,
    LagSelectionWarning,
    MiEstimate,
    WolfParams,
    cao_embedding_dimension,
    correlation_dimension,
    correlation_sum,
    lag_mutual_information,
    largest_lyapunov_wolf,
    lyapunov_map_derivative,
    mutual_information,
    select_lag,
    select_lag_from_curve,
)
from .classifiers import (
    EvalReport,
    KMeansSvmClassifier,
    MlpClassifier,
    SvmModel,
    evaluate,
    kmeans,
    svm_train,
)
from .features import (
    CLASS_ORDER,
    FEATURE_NAMES,
    ExtractionResult,
    FeatureMatrix,
    FeatureSummary,
    FeatureVector,
    HistogramResult,
    IndexParams,
    SkippedTrial,
    build_matrices,
    extract_features,
    group_by_class,
    histogram,
    summarize,
)
from .preprocessing import (
    FeatureScaler,
    PcaConditioner,
    apply_scaler,
    fit_scaler,
    pca_fit,
    pca_transform,
)
from .systems import SYSTEMS, SystemSpec, derivative_logistic, generate
from .timeseries import (
    DelayEmbedding,
    TimeSeries,
    WindowSpec,
    all_nearest_neighbors,
    default_theiler,
    delay_embed,
    nearest_neighbor,
    normalize,
    slice_window,
)

__version__ = "0.1.0"
