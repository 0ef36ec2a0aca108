"""
ESS 추정 결과 데이터 모델
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np


class TreeEssMethod(Enum):
    """위상 ESS 추정 방법 (값은 CLI 식별자)"""

    FRECHET_CORRELATION = "frechetCorrelation"
    SPLIT_FREQUENCY = "splitFrequency"
    MEDIAN_PSEUDO = "medianPseudo"
    MIN_PSEUDO = "minPseudo"
    FOLDED_RANK_MEDOID = "foldedRankMedoid"
    TOTAL_DISTANCE = "totalDistance"
    CMDS = "cmds"
    JUMP_DISTANCE_BOOTSTRAP = "jumpDistanceBootstrap"
    JUMP_DISTANCE_BOOTSTRAP_UNSMOOTHED = "jumpDistanceBootstrapUnsmoothed"
    FIXED_N = "fixedN"
    LOG_POSTERIOR = "logPosterior"

    @property
    def korean_name(self) -> str:
        """한글 이름 반환"""
        names = {
            TreeEssMethod.FRECHET_CORRELATION: "프레셰 상관 ESS",
            TreeEssMethod.SPLIT_FREQUENCY: "분할 빈도 ESS",
            TreeEssMethod.MEDIAN_PSEUDO: "중앙값 의사 ESS",
            TreeEssMethod.MIN_PSEUDO: "최솟값 의사 ESS",
            TreeEssMethod.FOLDED_RANK_MEDOID: "접힌 순위 메도이드 ESS",
            TreeEssMethod.TOTAL_DISTANCE: "총거리 ESS",
            TreeEssMethod.CMDS: "고전적 다차원척도 ESS",
            TreeEssMethod.JUMP_DISTANCE_BOOTSTRAP: "점프 거리 부트스트랩 ESS",
            TreeEssMethod.JUMP_DISTANCE_BOOTSTRAP_UNSMOOTHED: "점프 거리 부트스트랩 ESS (비평활)",
            TreeEssMethod.FIXED_N: "표본 수 기준선",
            TreeEssMethod.LOG_POSTERIOR: "로그 사후밀도 ESS",
        }
        return names[self]

    @property
    def needs_distances(self) -> bool:
        """RF 거리 행렬이 필요한 방법인지"""
        return self not in (
            TreeEssMethod.SPLIT_FREQUENCY,
            TreeEssMethod.FIXED_N,
            TreeEssMethod.LOG_POSTERIOR,
        )

    @property
    def is_randomized(self) -> bool:
        return self in (
            TreeEssMethod.JUMP_DISTANCE_BOOTSTRAP,
            TreeEssMethod.JUMP_DISTANCE_BOOTSTRAP_UNSMOOTHED,
        )

    @classmethod
    def parse(cls, value: str) -> "TreeEssMethod":
        """CLI 식별자 문자열을 enum으로 변환"""
        for method in cls:
            if method.value == value:
                return method
        valid = ", ".join(method.value for method in cls)
        raise ValueError(f"알 수 없는 ESS 방법: {value} (가능: {valid})")


@dataclass(frozen=True)
class AutocorrSeries:
    """자기상관 추정열 (rho[0] = 1)"""

    rho: np.ndarray
    n: int


@dataclass(frozen=True)
class EssEstimate:
    """유효표본크기 추정값"""

    value: float
    method: str
    n: int
    degenerate: bool = False

    @classmethod
    def clamped(
        cls, value: float, n: int, method: str, degenerate: bool = False
    ) -> "EssEstimate":
        """[1, n] 범위로 잘라낸 추정값 생성"""
        upper = max(n, 1)
        if not np.isfinite(value):
            value = float(upper) if value > 0 else 1.0
        return cls(
            value=float(min(max(value, 1.0), upper)),
            method=method,
            n=n,
            degenerate=degenerate,
        )

    @classmethod
    def degenerate_one(cls, n: int, method: str) -> "EssEstimate":
        """모든 표본이 같은 경우의 ESS = 1"""
        return cls(value=1.0, method=method, n=n, degenerate=True)

    def __float__(self) -> float:
        return self.value

    def __str__(self) -> str:
        flag = " (퇴화)" if self.degenerate else ""
        return f"ESS({self.method}: {self.value:.1f}/{self.n}{flag})"
