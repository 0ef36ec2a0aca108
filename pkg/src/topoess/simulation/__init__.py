from .nni import nni_neighbors
from .target import (
    CategoricalTreeDistribution,
    build_target,
    load_target,
    write_target,
    toy_target,
    two_mode_target,
)
from .sampler import Proposal, SamplerResult, sample_chain, run_chain, iid_sample

__all__ = [
    "nni_neighbors",
    "CategoricalTreeDistribution",
    "build_target",
    "load_target",
    "write_target",
    "toy_target",
    "two_mode_target",
    "Proposal",
    "SamplerResult",
    "sample_chain",
    "run_chain",
    "iid_sample",
]
