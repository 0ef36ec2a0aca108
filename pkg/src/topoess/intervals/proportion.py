"""
ESS 기반 비율 신뢰구간
"""

import math
from typing import Optional

from scipy import stats

from ..config import settings


def _check_level(level: float) -> float:
    level = settings.ci_level if level is None else level
    if not 0 < level < 1:
        raise ValueError(f"신뢰수준은 (0, 1) 범위여야 합니다: {level}")
    return level


def _check_proportion(p: float, ess: float):
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"비율은 [0, 1] 범위여야 합니다: {p}")
    if ess < 1:
        raise ValueError(f"ESS는 1 이상이어야 합니다: {ess}")


def jeffreys_ci(p_hat: float, ess: float, level: Optional[float] = None) -> tuple[float, float]:
    """Jeffreys 구간: Beta(x + ½, n - x + ½) 분위수, x = p̂·ESS, n = ESS (실수 허용)"""
    level = _check_level(level)
    _check_proportion(p_hat, ess)
    alpha = 1.0 - level
    x = p_hat * ess
    beta = stats.beta(x + 0.5, ess - x + 0.5)
    lower = 0.0 if p_hat == 0.0 else float(beta.ppf(alpha / 2))
    upper = 1.0 if p_hat == 1.0 else float(beta.isf(alpha / 2))
    return lower, upper


def agresti_caffo_diff_ci(
    p1: float, ess1: float, p2: float, ess2: float, level: Optional[float] = None
) -> tuple[float, float]:
    """Agresti-Caffo 차이 구간: 각 표본에 성공 1, 실패 1을 더한 Wald 구간"""
    level = _check_level(level)
    _check_proportion(p1, ess1)
    _check_proportion(p2, ess2)
    z = stats.norm.ppf(1.0 - (1.0 - level) / 2)

    n1, n2 = ess1 + 2.0, ess2 + 2.0
    q1, q2 = (p1 * ess1 + 1.0) / n1, (p2 * ess2 + 1.0) / n2
    center = q1 - q2
    half = z * math.sqrt(q1 * (1 - q1) / n1 + q2 * (1 - q2) / n2)
    return center - half, center + half
