"""Scattered-data interpolation with kinetic-based regularization."""

from ._core import (
    DataError,
    KineticModel,
    NumericalError,
    RbfModel,
    ThetaSearchResult,
    UsageError,
    benchmark,
    fit,
    normalize,
    predict_model_file,
    rbf_fit,
    sample,
    search_theta,
)

__all__ = [
    "DataError",
    "KineticModel",
    "NumericalError",
    "RbfModel",
    "ThetaSearchResult",
    "UsageError",
    "benchmark",
    "fit",
    "normalize",
    "predict_model_file",
    "rbf_fit",
    "sample",
    "search_theta",
]
