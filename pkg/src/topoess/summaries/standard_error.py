"""
몬테카를로 표준오차와 RMCE / ITMCE
"""

import math
from typing import Sequence

import numpy as np

from ..distance.rf import rf_distance
from ..models.summary import ErrorComparison
from ..models.tree import Topology


def se_scalar(estimates: Sequence[float]) -> float:
    """m개 실행 추정값의 표준편차 (분모 m)"""
    values = np.asarray(estimates, dtype=float)
    if len(values) < 2:
        raise ValueError(f"표준오차에는 추정값이 2개 이상 필요합니다 (현재 {len(values)}개).")
    return float(values.std())


def frechet_se_mrc(per_run_mrc: Sequence[Topology], pooled_mrc: Topology) -> float:
    """sqrt((1/m) Σ d_RF(τ̂_i, 풀링 MRC)²)"""
    if len(per_run_mrc) < 2:
        raise ValueError(f"MRC 표준오차에는 실행이 2개 이상 필요합니다 (현재 {len(per_run_mrc)}개).")
    squared = [rf_distance(mrc, pooled_mrc) ** 2 for mrc in per_run_mrc]
    return math.sqrt(sum(squared) / len(squared))


def compare_errors(se_mcmc: float, se_mcess: float) -> ErrorComparison:
    """RMCE = (se_MCMC - se_MCESS) / se_MCMC, ITMCE = se_MCMC / se_MCESS

    어느 한쪽이 0이면 degenerate로 표시한다.
    """
    if se_mcmc < 0 or se_mcess < 0:
        raise ValueError(f"표준오차는 음수일 수 없습니다: {se_mcmc}, {se_mcess}")

    if se_mcmc > 0 and se_mcess > 0:
        return ErrorComparison(
            se_mcmc=se_mcmc,
            se_mcess=se_mcess,
            rmce=(se_mcmc - se_mcess) / se_mcmc,
            itmce=se_mcmc / se_mcess,
        )

    if se_mcmc > 0:
        rmce, itmce = 1.0, math.inf
    elif se_mcess > 0:
        rmce, itmce = -math.inf, 0.0
    else:
        rmce, itmce = math.nan, math.nan
    return ErrorComparison(
        se_mcmc=se_mcmc, se_mcess=se_mcess, rmce=rmce, itmce=itmce, degenerate=True
    )
