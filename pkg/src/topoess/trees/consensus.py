"""
다수결 합의수 (MRC)
"""

from typing import Mapping, Union

from ..models.summary import SplitProbabilities
from ..models.tree import Split, TaxonMap, Topology


def mrc_tree(
    split_probs: Union[Mapping[Split, float], SplitProbabilities],
    taxa: TaxonMap,
    threshold: float = 0.5,
) -> Topology:
    """확률이 threshold보다 엄격히 큰 분할만 포함하는 합의수

    threshold >= 0.5 이면 남는 분할끼리 항상 호환되므로 유효한 (미해상일 수 있는) 트리가 된다.
    """
    if threshold < 0.5:
        raise ValueError(
            f"threshold {threshold} < 0.5: 남는 분할들이 서로 호환되지 않을 수 있습니다."
        )
    if isinstance(split_probs, SplitProbabilities):
        split_probs = split_probs.probs

    n = taxa.n_taxa
    kept = set()
    for split, prob in split_probs.items():
        if not 0.0 <= prob <= 1.0:
            raise ValueError(f"분할 확률은 [0, 1] 범위여야 합니다: {prob}")
        if prob > threshold and not split.is_trivial(n):
            kept.add(split)
    return Topology(taxa, frozenset(kept))
