from .probabilities import (
    split_probabilities,
    tree_probabilities,
    asdsf_msdsf,
    asdsf_from_frequencies,
)
from .standard_error import se_scalar, frechet_se_mrc, compare_errors

__all__ = [
    "split_probabilities",
    "tree_probabilities",
    "asdsf_msdsf",
    "asdsf_from_frequencies",
    "se_scalar",
    "frechet_se_mrc",
    "compare_errors",
]
