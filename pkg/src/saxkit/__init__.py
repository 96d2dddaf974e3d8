"""Symbolic time-series toolkit.

Piecewise aggregate approximation, data-adaptive alphabets (k-means,
KDE + Lloyd-Max, mean-shift), lower-bounding distances, and a streaming
goodness-of-fit anomaly detector with a self-adjusting codebook.
"""

from .anomaly import (
    DetectionEvent,
    DetectorConfig,
    EmpiricalPmf,
    chi2_quantile,
    empirical_pmf,
    gof_statistic,
    gof_step,
    kl_divergence,
    run_csax_detector,
    run_detector,
)
from .codec import (
    EncoderSpec,
    EncodingMethod,
    NormalizationMode,
    SymbolicSequence,
    TrainedEncoder,
    decode,
    encode,
    encoder_from_json,
    encoder_to_json,
    fit,
)
from .density import (
    DensityModel,
    KernelKind,
    bandwidth_gradient,
    bandwidth_silverman,
    kde_cdf,
    kde_cell_moments,
    kde_evaluate,
)
from .discretize import (
    Codebook,
    CodebookMethod,
    gaussian_equiprobable_codebook,
    kmeans_codebook,
    lloyd_max,
    quantize,
    reconstruct,
)
from .errors import SaxkitError
from .harness import (
    ExperimentGrid,
    LabeledStream,
    RocCurve,
    generate_synthetic,
    load_labeled_csv,
    load_series_csv,
    roc_curve,
    run_fixed_detector,
    run_tlb_rmse_experiment,
)
from .meanshift import ModeSet, mean_shift_modes, modes_to_codebook
from .metrics import (
    dist_error,
    dist_symbolic,
    euclidean,
    info_loss_to_std_gaussian,
    mindist,
    mindist_paa,
    tlb,
)
from .series import (
    NormalizationStats,
    PaaSeries,
    TimeSeries,
    paa,
    paa_then_znormalize,
    paa_variance_prediction,
    znormalize,
)

__version__ = "0.1.0"

__all__ = [
    "DetectionEvent",
    "DetectorConfig",
    "EmpiricalPmf",
    "chi2_quantile",
    "empirical_pmf",
    "gof_statistic",
    "gof_step",
    "kl_divergence",
    "run_csax_detector",
    "run_detector",
    "EncoderSpec",
    "EncodingMethod",
    "NormalizationMode",
    "SymbolicSequence",
    "TrainedEncoder",
    "decode",
    "encode",
    "encoder_from_json",
    "encoder_to_json",
    "fit",
    "DensityModel",
    "KernelKind",
    "bandwidth_gradient",
    "bandwidth_silverman",
    "kde_cdf",
    "kde_cell_moments",
    "kde_evaluate",
    "Codebook",
    "CodebookMethod",
    "gaussian_equiprobable_codebook",
    "kmeans_codebook",
    "lloyd_max",
    "quantize",
    "reconstruct",
    "SaxkitError",
    "ExperimentGrid",
    "LabeledStream",
    "RocCurve",
    "generate_synthetic",
    "load_labeled_csv",
    "load_series_csv",
    "roc_curve",
    "run_fixed_detector",
    "run_tlb_rmse_experiment",
    "ModeSet",
    "mean_shift_modes",
    "modes_to_codebook",
    "dist_error",
    "dist_symbolic",
    "euclidean",
    "info_loss_to_std_gaussian",
    "mindist",
    "mindist_paa",
    "tlb",
    "NormalizationStats",
    "PaaSeries",
    "TimeSeries",
    "paa",
    "paa_then_znormalize",
    "paa_variance_prediction",
    "znormalize",
    "__version__",
]
