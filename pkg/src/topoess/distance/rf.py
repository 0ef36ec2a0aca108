"""
Robinson-Foulds 거리
"""

import numpy as np

from ..models.tree import Topology
from ..trees.encoding import EncodedChain


def rf_distance(a: Topology, b: Topology) -> int:
    """두 위상의 분할 대칭차 크기 (미해상 위상 허용)"""
    a.check_taxa(b)
    return len(a.splits ^ b.splits)


def unique_rf_matrix(encoded: EncodedChain) -> np.ndarray:
    """고유 위상끼리의 RF 거리 행렬

    분할 포함 행렬 I에 대해 d(i, j) = |i| + |j| - 2 (I Iᵀ)_ij
    """
    incidence = encoded.incidence.astype(float)
    sizes = incidence.sum(axis=1)
    shared = incidence @ incidence.T
    distances = sizes[:, None] + sizes[None, :] - 2.0 * shared
    return np.rint(distances).astype(np.int64)
