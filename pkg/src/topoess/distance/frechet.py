"""
체인 거리 행렬과 프레셰 통계량
"""

import logging
from typing import Optional, Sequence

import numpy as np

from ..errors import InsufficientSamplesError
from ..models.tree import Chain
from ..trees.encoding import EncodedChain, encode_chain
from .matrix import DistanceMatrix
from .rf import unique_rf_matrix

logger = logging.getLogger(__name__)


def distance_matrix(chain: Chain, encoded: Optional[EncodedChain] = None) -> DistanceMatrix:
    """체인 표본 간 RF 거리 행렬 (고유 위상 단위로 계산)"""
    if not len(chain):
        raise InsufficientSamplesError(f"[{chain.name}] 빈 체인입니다.")
    encoded = encoded or encode_chain(chain)
    unique = unique_rf_matrix(encoded)
    logger.debug(f"[{chain.name}] 거리 행렬: 표본 {encoded.n}개, 고유 위상 {len(encoded.unique)}개")
    return DistanceMatrix(unique=unique, codes=encoded.codes)


def frechet_variance(d: DistanceMatrix, idx: Optional[Sequence[int]] = None) -> float:
    """부분집합의 프레셰 분산 (1/(n(n-1))) Σ_{i<j} d(x_i, x_j)²"""
    sub = d if idx is None else d.take(idx)
    k = sub.n
    if k < 2:
        raise InsufficientSamplesError(f"프레셰 분산에는 표본이 2개 이상 필요합니다 (현재 {k}개).")
    col, _ = sub.upper_squared_sums()
    return float(col.sum() / (k * (k - 1)))


def medoid_indices(d: DistanceMatrix) -> np.ndarray:
    """거리 합이 최소인 모든 표본 인덱스"""
    if d.n == 0:
        raise InsufficientSamplesError("빈 거리 행렬입니다.")
    sums = d.row_sums
    return np.flatnonzero(sums == sums.min())
