"""
사후분포 요약 및 오차 비교 데이터 모델
"""

from dataclasses import dataclass, field
from enum import Enum

from .tree import Split, TaxonMap, Topology


class SummaryKind(Enum):
    """몬테카를로 오차를 측정하는 사후 요약 종류"""

    SPLIT = "split"  # 분할 확률
    TREE = "tree"  # 위상 확률
    MRC = "mrc"  # 다수결 합의수

    @property
    def korean_name(self) -> str:
        names = {
            SummaryKind.SPLIT: "분할 확률",
            SummaryKind.TREE: "위상 확률",
            SummaryKind.MRC: "다수결 합의수",
        }
        return names[self]


@dataclass
class SplitProbabilities:
    """체인에서 관측된 분할의 빈도 (없는 분할은 확률 0)"""

    taxa: TaxonMap
    probs: dict[Split, float]
    n: int
    counts: dict[Split, int] = field(default_factory=dict)

    def get(self, split: Split) -> float:
        return self.probs.get(split, 0.0)

    def split_id(self, split: Split) -> str:
        """작은 쪽 분류군 라벨을 세미콜론으로 연결한 식별자"""
        side = split.smaller_side(self.taxa.n_taxa)
        return ";".join(self.taxa.labels_of(side))


@dataclass
class TreeProbabilities:
    """체인에서 관측된 위상의 빈도"""

    probs: dict[Topology, float]
    n: int
    counts: dict[Topology, int] = field(default_factory=dict)

    def get(self, topology: Topology) -> float:
        return self.probs.get(topology, 0.0)


@dataclass(frozen=True)
class ErrorComparison:
    """MCMC 표준오차와 ESS 기반 표준오차의 비교"""

    se_mcmc: float
    se_mcess: float
    rmce: float
    itmce: float
    degenerate: bool = False

    @property
    def overestimated(self) -> bool:
        """ESS를 과대추정했는지 (RMCE > 0)"""
        return self.rmce > 0
