"""
가짜 MCMC 샘플러 - 범주형 목표 분포 위의 NNI Metropolis 체인
"""

import logging
from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..models.tree import Chain
from .target import CategoricalTreeDistribution

logger = logging.getLogger(__name__)

# 한 번에 생성하는 반복 수 (반복마다 균등 난수 3개)
_CHUNK = 65536


class Proposal(Enum):
    """NNI 제안 방식"""

    RESTRICTED = "restricted"  # 2단계: 지지집합 밖 제안 여부를 먼저 결정
    FULL = "full"  # 전체 2(n-3)개 이웃 중 균등 제안

    @property
    def korean_name(self) -> str:
        names = {
            Proposal.RESTRICTED: "2단계 제안",
            Proposal.FULL: "전체 이웃 제안",
        }
        return names[self]


@dataclass
class SamplerResult:
    """체인과 제안/수락 통계"""

    chain: Chain
    iterations: int
    in_support: int = 0  # 지지집합 안 위상이 제안된 횟수
    accepted: int = 0

    @property
    def acceptance_rate(self) -> float:
        return self.accepted / self.iterations if self.iterations else 0.0

    @property
    def in_support_rate(self) -> float:
        return self.in_support / self.iterations if self.iterations else 0.0

    def __str__(self) -> str:
        return (
            f"{self.chain.name}: 반복 {self.iterations}회, 표본 {len(self.chain)}개, "
            f"수락률 {self.acceptance_rate:.3%}"
        )


def sample_chain(
    target: CategoricalTreeDistribution,
    iterations: int,
    thin: int = 1,
    seed=None,
    proposal: Proposal = Proposal.RESTRICTED,
    name: str = "fake",
) -> SamplerResult:
    """NNI Metropolis 체인 실행

    시작 상태는 목표 분포에서 뽑는다. 반복마다 균등 난수 (u0, u1, u2)를 쓰며,
    두 제안 방식은 같은 난수열에서 같은 분포를 따른다.
    thin번째 반복마다 상태와 log 확률을 기록한다.
    """
    if thin < 1 or iterations < thin:
        raise ValueError(f"iterations >= thin >= 1 이어야 합니다: iterations={iterations}, thin={thin}")

    rng = np.random.default_rng(seed)
    state = int(target.draw_indices(rng.random(1))[0])

    probs = target.probs.tolist()
    total = target.total_nni_degree
    restricted = proposal == Proposal.RESTRICTED
    if restricted:
        neighbors = target.neighbors
        degrees = [len(adjacent) for adjacent in neighbors]
    else:
        full = target.full_neighbors.tolist()

    recorded = np.empty(iterations // thin, dtype=np.int64)
    in_support = 0
    accepted = 0
    done = 0
    while done < iterations:
        size = min(_CHUNK, iterations - done)
        for u0, u1, u2 in rng.random((size, 3)).tolist():
            if restricted:
                degree = degrees[state]
                candidate = -1
                if u0 * total < degree:
                    candidate = neighbors[state][int(u1 * degree)]
            else:
                candidate = full[state][int(u1 * total)]

            if candidate >= 0:
                in_support += 1
                if u2 * probs[state] < probs[candidate]:
                    state = candidate
                    accepted += 1

            done += 1
            if done % thin == 0:
                recorded[done // thin - 1] = state

    chain = Chain(
        taxa=target.taxa,
        samples=[target.support[i] for i in recorded],
        log_density=target.log_probs[recorded],
        name=name,
    )
    result = SamplerResult(chain=chain, iterations=iterations, in_support=in_support, accepted=accepted)
    logger.debug(str(result))
    return result


def run_chain(
    target: CategoricalTreeDistribution,
    iterations: int,
    thin: int = 1,
    seed=None,
    proposal: Proposal = Proposal.RESTRICTED,
    name: str = "fake",
) -> Chain:
    return sample_chain(target, iterations, thin, seed, proposal, name).chain


def iid_sample(
    target: CategoricalTreeDistribution, k: int, seed=None, name: str = "iid"
) -> Chain:
    """목표 분포에서 k개 독립 표본 (역CDF)"""
    if k < 1:
        raise ValueError(f"k는 1 이상이어야 합니다: {k}")
    rng = np.random.default_rng(seed)
    drawn = target.draw_indices(rng.random(k))
    return Chain(
        taxa=target.taxa,
        samples=[target.support[i] for i in drawn],
        log_density=target.log_probs[drawn],
        name=name,
    )
