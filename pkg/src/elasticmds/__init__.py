"""Elastic multidimensional scaling: metric and ordinal fits of McGee stress."""

__version__ = "0.1.0"

from .core import (
    Configuration,
    DegenerateConfigurationError,
    DissimilarityData,
    StressReport,
    ValidationError,
    ZeroDissimilarityError,
    ZeroDistanceError,
    elastic_stress,
    kruskal_stress,
    log_stress,
    pair_distances,
    pair_indices,
    ratio_form_stress,
)
from .ingest import builtin_dataset, parse_matrix, to_dissimilarities
from .initial import initial_configuration, optimal_lambda, torgerson
from .isotonic import update_delta, weighted_pava
from .majorize import build_workspace, guttman_update
from .solver import SolveOptions, SolveResult, solve, stress_report

__all__ = [
    "Configuration",
    "DegenerateConfigurationError",
    "DissimilarityData",
    "SolveOptions",
    "SolveResult",
    "StressReport",
    "ValidationError",
    "ZeroDissimilarityError",
    "ZeroDistanceError",
    "build_workspace",
    "builtin_dataset",
    "elastic_stress",
    "guttman_update",
    "initial_configuration",
    "kruskal_stress",
    "log_stress",
    "optimal_lambda",
    "pair_distances",
    "pair_indices",
    "parse_matrix",
    "ratio_form_stress",
    "solve",
    "stress_report",
    "to_dissimilarities",
    "torgerson",
    "update_delta",
    "weighted_pava",
]
