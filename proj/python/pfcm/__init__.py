"""Penalized fuzzy c-means and companion clustering for expression matrices."""

from ._core import (
    ConfigError,
    DataError,
    NumericalError,
    fcm,
    kmeans,
    pfcm,
    rough_kmeans,
    validity,
    zscore,
)

__all__ = [
    "ConfigError",
    "DataError",
    "NumericalError",
    "fcm",
    "kmeans",
    "pfcm",
    "rough_kmeans",
    "validity",
    "zscore",
]
