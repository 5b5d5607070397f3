"""Variance estimation for linear regression with a drifting coefficient.

The data model is a random-walk regression: a hidden coefficient vector takes
an independent zero-mean step of variance sigma2 per coordinate at each time,
and each observation is the inner product with a known feature row plus
zero-mean noise of variance eta2.  The package provides

* a spectrum-truncation estimator of (sigma2, eta2) from a single trajectory
  (:func:`estimate`), built on the closed-form Gram matrix of the summed
  feature operator,
* a matching Kalman-style forward filter (:func:`run_filter`) and baselines
  (online gradient, stationary least squares, likelihood fit),
* a sub-Gaussian simulator and replication harness (:func:`simulate`,
  :func:`replicate`), and
* CSV data I/O plus a command line (``stve estimate|simulate|benchmark|
  filter|spectrum``).
"""
from .baselines import (
    MleResult,
    OnlineGradientConfig,
    OnlineGradientRun,
    mle_fit,
    online_gradient_run,
    stationary_regression,
    tune_learning_rate,
)
from .dataio import (
    CsvFormatError,
    NormalizationParams,
    quadratic_features,
    read_csv,
    split_and_normalize,
    split_dataset,
    write_csv,
)
from .estimator import (
    FlatSpectrumError,
    GapDiagnostic,
    MomentCheck,
    StveConfig,
    StveEstimate,
    estimate,
    gap_diagnostic,
    moment_equation_check,
    truncation_size,
)
from .kalman import KalmanConfig, KalmanTrajectory, predict_next, run_filter
from .operators import (
    NormSummary,
    RegressionDataset,
    apply_block_summation,
    apply_observation,
    apply_summation,
    dense_system_matrix,
    difference_spectrum,
    filter_rows,
    gram_matrix,
    norm_summary,
    select_rows,
    system_hs_norm_sq,
)
from .simulator import (
    NOISE_FAMILIES,
    NoiseSpec,
    ReplicationResult,
    SimulationConfig,
    replicate,
    simulate,
)
from .spectral import (
    GramSpectrum,
    SpectralFunctionals,
    eigendecompose,
    functionals,
    quadratic_forms,
)

__version__ = "0.1.0"

__all__ = [
    "CsvFormatError",
    "FlatSpectrumError",
    "GapDiagnostic",
    "GramSpectrum",
    "KalmanConfig",
    "KalmanTrajectory",
    "MleResult",
    "MomentCheck",
    "NOISE_FAMILIES",
    "NoiseSpec",
    "NormSummary",
    "NormalizationParams",
    "OnlineGradientConfig",
    "OnlineGradientRun",
    "RegressionDataset",
    "ReplicationResult",
    "SimulationConfig",
    "SpectralFunctionals",
    "StveConfig",
    "StveEstimate",
    "apply_block_summation",
    "apply_observation",
    "apply_summation",
    "dense_system_matrix",
    "difference_spectrum",
    "eigendecompose",
    "estimate",
    "filter_rows",
    "functionals",
    "gap_diagnostic",
    "gram_matrix",
    "mle_fit",
    "moment_equation_check",
    "norm_summary",
    "online_gradient_run",
    "predict_next",
    "quadratic_features",
    "quadratic_forms",
    "read_csv",
    "replicate",
    "run_filter",
    "select_rows",
    "simulate",
    "split_and_normalize",
    "split_dataset",
    "stationary_regression",
    "system_hs_norm_sq",
    "truncation_size",
    "tune_learning_rate",
    "write_csv",
    "__version__",
]
