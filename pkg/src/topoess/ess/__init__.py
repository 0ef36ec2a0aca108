from .univariate import (
    autocorrelations,
    sum_of_correlations_ess,
    ar_spectrum_ess,
    batch_means_limiting_variance,
    batch_means_limiting_variance_vec,
    batch_means_ess,
)
from .tree import (
    frechet_correlation_ess,
    split_frequency_ess,
    pseudo_ess,
    folded_rank_medoid_ess,
    total_distance_ess,
    cmds_ess,
    jump_distance_ess,
    fixed_n_ess,
    log_posterior_ess,
)
from .base import TreeEssEstimator
from .estimators import MethodEstimator, ESTIMATORS, get_estimator, compute_ess

__all__ = [
    "autocorrelations",
    "sum_of_correlations_ess",
    "ar_spectrum_ess",
    "batch_means_limiting_variance",
    "batch_means_limiting_variance_vec",
    "batch_means_ess",
    "frechet_correlation_ess",
    "split_frequency_ess",
    "pseudo_ess",
    "folded_rank_medoid_ess",
    "total_distance_ess",
    "cmds_ess",
    "jump_distance_ess",
    "fixed_n_ess",
    "log_posterior_ess",
    "TreeEssEstimator",
    "MethodEstimator",
    "ESTIMATORS",
    "get_estimator",
    "compute_ess",
]
