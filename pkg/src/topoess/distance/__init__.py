from .rf import rf_distance, unique_rf_matrix
from .matrix import DistanceMatrix
from .frechet import distance_matrix, frechet_variance, medoid_indices

__all__ = [
    "rf_distance",
    "unique_rf_matrix",
    "DistanceMatrix",
    "distance_matrix",
    "frechet_variance",
    "medoid_indices",
]
