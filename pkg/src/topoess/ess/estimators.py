"""
TreeEssMethod별 추정기와 일괄 계산
"""

import logging
from typing import Iterable, Optional

from ..distance.frechet import distance_matrix
from ..distance.matrix import DistanceMatrix
from ..models.ess import EssEstimate, TreeEssMethod
from ..models.tree import Chain
from .base import TreeEssEstimator
from . import tree

logger = logging.getLogger(__name__)


class MethodEstimator(TreeEssEstimator):
    """TreeEssMethod 하나를 함수형 API로 위임하는 추정기"""

    def __init__(self, method: TreeEssMethod):
        self.method = method
        self.name = method.value
        self.needs_distances = method.needs_distances

    def estimate(
        self, chain: Chain, distances: Optional[DistanceMatrix] = None, seed=None
    ) -> EssEstimate:
        if self.needs_distances and distances is None:
            distances = distance_matrix(chain)

        method = self.method
        if method == TreeEssMethod.FRECHET_CORRELATION:
            result = tree.frechet_correlation_ess(distances)
        elif method == TreeEssMethod.SPLIT_FREQUENCY:
            result = tree.split_frequency_ess(chain)
        elif method == TreeEssMethod.MEDIAN_PSEUDO:
            result = tree.pseudo_ess(distances, "median")
        elif method == TreeEssMethod.MIN_PSEUDO:
            result = tree.pseudo_ess(distances, "min")
        elif method == TreeEssMethod.FOLDED_RANK_MEDOID:
            result = tree.folded_rank_medoid_ess(distances)
        elif method == TreeEssMethod.TOTAL_DISTANCE:
            result = tree.total_distance_ess(distances)
        elif method == TreeEssMethod.CMDS:
            result = tree.cmds_ess(distances)
        elif method == TreeEssMethod.JUMP_DISTANCE_BOOTSTRAP:
            result = tree.jump_distance_ess(distances, smoothed=True, seed=seed)
        elif method == TreeEssMethod.JUMP_DISTANCE_BOOTSTRAP_UNSMOOTHED:
            result = tree.jump_distance_ess(distances, smoothed=False, seed=seed)
        elif method == TreeEssMethod.FIXED_N:
            result = tree.fixed_n_ess(chain)
        else:
            result = tree.log_posterior_ess(chain)

        if result.degenerate:
            self._log_debug(f"{chain.name}: 퇴화 체인 (ESS = {result.value:g})")
        return result


# 방법별 추정기 레지스트리
ESTIMATORS: dict[TreeEssMethod, TreeEssEstimator] = {
    method: MethodEstimator(method) for method in TreeEssMethod
}


def get_estimator(method: TreeEssMethod) -> TreeEssEstimator:
    return ESTIMATORS[method]


def compute_ess(
    chain: Chain,
    methods: Iterable[TreeEssMethod],
    seed=None,
    distances: Optional[DistanceMatrix] = None,
) -> dict[TreeEssMethod, EssEstimate]:
    """여러 방법의 ESS를 거리 행렬 한 번으로 계산"""
    methods = list(methods)
    if distances is None and any(method.needs_distances for method in methods):
        distances = distance_matrix(chain)

    results = {}
    for method in methods:
        results[method] = ESTIMATORS[method].estimate(chain, distances, seed=seed)
        logger.debug(f"[{chain.name}] {method.value}: {results[method].value:.2f}")
    return results
