"""
계통수 위상 데이터 모델
"""

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Optional, Sequence

import numpy as np

from ..config import settings
from ..errors import TaxonMismatchError


@dataclass(frozen=True)
class TaxonMap:
    """분류군 라벨과 0부터 시작하는 인덱스의 고정 대응"""

    names: tuple[str, ...]
    _index: dict = field(init=False, repr=False, compare=False)
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        names = tuple(self.names)
        if any(not name for name in names):
            raise ValueError("분류군 라벨은 비어 있을 수 없습니다.")
        if len(set(names)) != len(names):
            raise ValueError("분류군 라벨이 중복되었습니다.")
        if len(names) > settings.max_taxa:
            raise ValueError(
                f"분류군 수 {len(names)}개가 상한 {settings.max_taxa}개를 넘습니다."
            )
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "_index", {name: i for i, name in enumerate(names)})
        object.__setattr__(self, "_hash", hash(names))

    @classmethod
    def from_labels(cls, labels: Iterable[str]) -> "TaxonMap":
        """라벨 집합으로부터 정렬된 TaxonMap 생성"""
        return cls(tuple(sorted(labels)))

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, TaxonMap):
            return NotImplemented
        return self.names == other.names

    def __len__(self) -> int:
        return len(self.names)

    @property
    def index(self) -> dict[str, int]:
        return self._index

    @property
    def n_taxa(self) -> int:
        return len(self.names)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.names)) - 1

    def labels_of(self, mask: int) -> list[str]:
        """비트마스크에 포함된 분류군 라벨 (인덱스 순)"""
        return [self.names[i] for i in _bits(mask)]


def _bits(mask: int) -> list[int]:
    indices = []
    i = 0
    while mask:
        if mask & 1:
            indices.append(i)
        mask >>= 1
        i += 1
    return indices


@dataclass(frozen=True, order=True)
class Split:
    """분류군 집합의 이분할 (taxon 0을 포함하지 않는 쪽을 저장)"""

    mask: int

    @classmethod
    def from_mask(cls, mask: int, n_taxa: int) -> "Split":
        """임의의 한쪽 비트마스크를 정규형으로 변환"""
        full = (1 << n_taxa) - 1
        mask &= full
        if mask & 1:
            mask = full ^ mask
        return cls(mask)

    @property
    def size(self) -> int:
        return self.mask.bit_count()

    def complement(self, n_taxa: int) -> int:
        return ((1 << n_taxa) - 1) ^ self.mask

    def is_trivial(self, n_taxa: int) -> bool:
        """한쪽이 분류군 1개 이하이면 자명한 분할"""
        size = self.size
        return size < 2 or n_taxa - size < 2

    def is_compatible(self, other: "Split", n_taxa: int) -> bool:
        """네 교집합 중 하나라도 비어 있으면 호환"""
        a, b = self.mask, other.mask
        ac, bc = self.complement(n_taxa), other.complement(n_taxa)
        return not (a & b) or not (a & bc) or not (ac & b) or not (ac & bc)

    def smaller_side(self, n_taxa: int) -> int:
        """크기가 작은 쪽 (같으면 저장된 쪽)"""
        if self.size <= n_taxa - self.size:
            return self.mask
        return self.complement(n_taxa)


@dataclass(frozen=True, eq=False)
class Topology:
    """비자명 분할 집합으로 식별되는 무근 계통수 위상"""

    taxa: TaxonMap
    splits: frozenset[Split]

    @classmethod
    def from_masks(cls, taxa: TaxonMap, masks: Iterable[int]) -> "Topology":
        """임의 방향 비트마스크에서 정규화 후 자명 분할을 제거하여 생성"""
        n = taxa.n_taxa
        splits = set()
        for mask in masks:
            split = Split.from_mask(mask, n)
            if not split.is_trivial(n):
                splits.add(split)
        return cls(taxa, frozenset(splits))

    def __hash__(self) -> int:
        return hash(self.splits)

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, Topology):
            return NotImplemented
        return self.splits == other.splits and self.taxa == other.taxa

    @property
    def n_taxa(self) -> int:
        return self.taxa.n_taxa

    @property
    def is_binary(self) -> bool:
        """완전 해상 여부 (비자명 분할이 정확히 n-3개)"""
        return len(self.splits) == self.n_taxa - 3

    @property
    def masks(self) -> tuple[int, ...]:
        return tuple(sorted(split.mask for split in self.splits))

    def is_valid(self) -> bool:
        """모든 분할 쌍이 서로 호환되는지 검사"""
        n = self.n_taxa
        return all(a.is_compatible(b, n) for a, b in combinations(self.splits, 2))

    def check_taxa(self, other: "Topology"):
        if self.taxa != other.taxa:
            raise TaxonMismatchError("두 위상의 TaxonMap이 다릅니다.")

    def __repr__(self) -> str:
        return f"Topology(n_taxa={self.n_taxa}, splits={len(self.splits)})"


@dataclass
class Chain:
    """MCMC 실행 하나의 위상 표본열"""

    taxa: TaxonMap
    samples: list[Topology]
    log_density: Optional[np.ndarray] = None
    name: str = "chain"

    def __post_init__(self):
        self.samples = list(self.samples)
        for sample in self.samples:
            if sample.taxa != self.taxa:
                raise TaxonMismatchError(
                    f"[{self.name}] 표본의 TaxonMap이 체인과 다릅니다."
                )
        if self.log_density is not None:
            self.log_density = np.asarray(self.log_density, dtype=float)
            if len(self.log_density) != len(self.samples):
                raise ValueError(
                    f"[{self.name}] 로그 밀도 길이({len(self.log_density)})가 "
                    f"표본 수({len(self.samples)})와 다릅니다."
                )

    def __len__(self) -> int:
        return len(self.samples)

    def take(self, indices: Sequence[int], name: Optional[str] = None) -> "Chain":
        """주어진 인덱스 순서의 부분 체인"""
        indices = list(indices)
        log_density = None
        if self.log_density is not None:
            log_density = self.log_density[np.asarray(indices, dtype=int)]
        return Chain(
            taxa=self.taxa,
            samples=[self.samples[i] for i in indices],
            log_density=log_density,
            name=name or self.name,
        )

    def prefix(self, k: int) -> "Chain":
        return self.take(range(k))

    def reversed(self) -> "Chain":
        return self.take(range(len(self) - 1, -1, -1))

    def thinned(self, burnin: int = 0, thin: int = 1) -> "Chain":
        """앞쪽 burnin개를 버리고 thin 간격으로 추출"""
        if burnin < 0 or thin < 1:
            raise ValueError("burnin >= 0, thin >= 1 이어야 합니다.")
        return self.take(range(burnin, len(self), thin))

    @property
    def is_constant(self) -> bool:
        """모든 표본이 같은 위상인지 여부"""
        first = self.samples[0] if self.samples else None
        return all(sample == first for sample in self.samples)

    @staticmethod
    def check_shared_taxa(chains: Sequence["Chain"]) -> TaxonMap:
        """여러 체인이 같은 TaxonMap을 쓰는지 확인"""
        if not chains:
            raise ValueError("체인이 없습니다.")
        taxa = chains[0].taxa
        for chain in chains[1:]:
            if chain.taxa != taxa:
                raise TaxonMismatchError(
                    f"체인 '{chain.name}'의 분류군 집합이 '{chains[0].name}'과 다릅니다."
                )
        return taxa
