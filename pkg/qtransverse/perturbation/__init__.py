"""The F-map and the certified perturbation search."""

from .fmap import FMap, f_to_F
from .search import (
    PerturbationCertificate,
    PerturbationProblem,
    Rejection,
    find_perturbation,
    perturbed,
    sample_ball,
    truncation_degree,
)

__all__ = [
    "FMap",
    "f_to_F",
    "PerturbationCertificate",
    "PerturbationProblem",
    "Rejection",
    "find_perturbation",
    "perturbed",
    "sample_ball",
    "truncation_degree",
]
