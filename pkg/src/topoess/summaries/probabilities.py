"""
분할 확률 / 위상 확률 / ASDSF
"""

from collections import Counter
from typing import Mapping, Optional, Sequence

import numpy as np

from ..config import settings
from ..errors import InsufficientSamplesError
from ..models.summary import SplitProbabilities, TreeProbabilities
from ..models.tree import Chain, Split
from ..trees.encoding import EncodedChain, encode_chain


def split_probabilities(chain: Chain, encoded: Optional[EncodedChain] = None) -> SplitProbabilities:
    """관측된 비자명 분할별 표본 비율"""
    n = len(chain)
    if not n:
        raise InsufficientSamplesError(f"[{chain.name}] 빈 체인입니다.")
    encoded = encoded or encode_chain(chain)
    split_counts = encoded.counts @ encoded.incidence.astype(np.int64)
    counts = {split: int(c) for split, c in zip(encoded.splits, split_counts)}
    return SplitProbabilities(
        taxa=chain.taxa,
        probs={split: c / n for split, c in counts.items()},
        n=n,
        counts=counts,
    )


def tree_probabilities(chain: Chain) -> TreeProbabilities:
    """관측된 위상별 표본 비율"""
    n = len(chain)
    if not n:
        raise InsufficientSamplesError(f"[{chain.name}] 빈 체인입니다.")
    counts = dict(Counter(chain.samples))
    return TreeProbabilities(
        probs={topology: c / n for topology, c in counts.items()},
        n=n,
        counts=counts,
    )


def asdsf_from_frequencies(
    frequencies: Sequence[Mapping[Split, float]], min_freq: float
) -> tuple[float, float]:
    """체인별 분할 빈도로부터 (ASDSF, MSDSF), 표준편차는 분모 m"""
    if len(frequencies) < 2:
        raise ValueError(f"ASDSF에는 체인이 2개 이상 필요합니다 (현재 {len(frequencies)}개).")

    splits = sorted(
        {split for freq in frequencies for split, p in freq.items() if p >= min_freq}
    )
    if not splits:
        return 0.0, 0.0

    table = np.array([[freq.get(split, 0.0) for split in splits] for freq in frequencies])
    deviations = table.std(axis=0)
    return float(deviations.mean()), float(deviations.max())


def asdsf_msdsf(chains: Sequence[Chain], min_freq: Optional[float] = None) -> tuple[float, float]:
    """분할 빈도 체인 간 표준편차의 평균(ASDSF)과 최댓값(MSDSF)

    어느 한 체인에서라도 빈도가 min_freq 이상인 분할만 포함한다.
    """
    if len(chains) < 2:
        raise ValueError(f"ASDSF에는 체인이 2개 이상 필요합니다 (현재 {len(chains)}개).")
    Chain.check_shared_taxa(chains)
    min_freq = settings.asdsf_min_freq if min_freq is None else min_freq
    return asdsf_from_frequencies([split_probabilities(c).probs for c in chains], min_freq)
