"""
체인 인코딩 - 고유 위상 목록과 분할 포함 행렬
"""

from dataclasses import dataclass

import numpy as np

from ..models.tree import Chain, Split, TaxonMap, Topology


@dataclass(frozen=True, eq=False)
class EncodedChain:
    """체인을 고유 위상 코드열과 (고유 위상 x 분할) 0/1 행렬로 표현"""

    taxa: TaxonMap
    unique: tuple[Topology, ...]  # 첫 등장 순서
    codes: np.ndarray  # 표본별 고유 위상 인덱스
    splits: tuple[Split, ...]  # 관측된 비자명 분할 (마스크 오름차순)
    incidence: np.ndarray  # (고유 위상 수, 분할 수) uint8

    @property
    def n(self) -> int:
        return len(self.codes)

    @property
    def counts(self) -> np.ndarray:
        """고유 위상별 표본 수"""
        return np.bincount(self.codes, minlength=len(self.unique))

    def indicator_matrix(self) -> np.ndarray:
        """표본별 분할 지시 벡터 (n x 분할 수)"""
        return self.incidence[self.codes].astype(float)

    def split_frequencies(self, codes: np.ndarray = None) -> np.ndarray:
        """주어진 코드열(기본: 전체 체인)의 분할 빈도 벡터"""
        if codes is None:
            codes = self.codes
        counts = np.bincount(codes, minlength=len(self.unique)).astype(float)
        return counts @ self.incidence / max(len(codes), 1)


def encode_chain(chain: Chain) -> EncodedChain:
    """체인을 고유 위상 기준으로 인코딩"""
    index: dict[Topology, int] = {}
    codes = np.empty(len(chain), dtype=np.int64)
    for i, topology in enumerate(chain.samples):
        codes[i] = index.setdefault(topology, len(index))

    unique = tuple(index)
    splits = sorted({split for topology in unique for split in topology.splits})
    split_index = {split: j for j, split in enumerate(splits)}

    incidence = np.zeros((len(unique), len(splits)), dtype=np.uint8)
    for row, topology in enumerate(unique):
        for split in topology.splits:
            incidence[row, split_index[split]] = 1

    return EncodedChain(
        taxa=chain.taxa,
        unique=unique,
        codes=codes,
        splits=tuple(splits),
        incidence=incidence,
    )
