"""Grow-and-destroy scale-free network generator and topology analysis."""

__version__ = "0.1.0"

from ._kernels import BACKEND
from .attack import AttackSpec, apply_attack, removal_weights
from .errors import DomainError, GrowDestroyError, ParameterError, PreconditionError
from .generator import (GenerationParams, attachment_weights, build_seed_ring, grow,
                        sample_targets)
from .graph import (ComponentLabeling, Graph, connected_components, local_clustering,
                    new_graph)
from .metrics import (DegreeHistogram, MetricsReport, PowerLawFit, average_clustering,
                      average_degree, cluster_size_distribution, collapse_degree_distribution,
                      compute_metrics, degree_distribution, fit_power_law, giant_fraction)
from .rng import RngStream, derive_seed

__all__ = [
    "BACKEND", "AttackSpec", "apply_attack", "removal_weights", "DomainError",
    "GrowDestroyError", "ParameterError", "PreconditionError", "GenerationParams",
    "attachment_weights", "build_seed_ring", "grow", "sample_targets", "ComponentLabeling",
    "Graph", "connected_components", "local_clustering", "new_graph", "DegreeHistogram",
    "MetricsReport", "PowerLawFit", "average_clustering", "average_degree",
    "cluster_size_distribution", "collapse_degree_distribution", "compute_metrics",
    "degree_distribution", "fit_power_law", "giant_fraction", "RngStream", "derive_seed",
]
