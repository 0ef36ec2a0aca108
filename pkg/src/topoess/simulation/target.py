"""
가짜 MCMC 목표 분포 - 위상 위의 범주형 분포와 NNI 인접 구조
"""

import logging
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence, Union

import numpy as np
import pandas as pd
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from ..config import settings
from ..errors import TargetError
from ..models.summary import TreeProbabilities
from ..models.tree import Chain, TaxonMap, Topology
from ..trees.newick import parse_newick, serialize_newick
from .nni import nni_neighbors

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class CategoricalTreeDistribution:
    """유한 지지집합 위의 위상 분포 (생성 후 불변)"""

    taxa: TaxonMap
    support: tuple[Topology, ...]
    probs: np.ndarray
    neighbors: tuple[tuple[int, ...], ...]  # 지지집합 안의 NNI 이웃 인덱스

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=float)
        object.__setattr__(self, "probs", probs)
        if not self.support:
            raise TargetError("지지집합이 비어 있습니다.")
        if len(probs) != len(self.support) or len(self.neighbors) != len(self.support):
            raise TargetError("지지집합, 확률, 이웃 목록의 길이가 다릅니다.")
        if np.any(probs <= 0):
            raise TargetError("지지집합의 확률은 모두 양수여야 합니다.")
        if abs(probs.sum() - 1.0) > 1e-12:
            raise TargetError(f"확률 합이 1이 아닙니다: {probs.sum()!r}")
        for i, topology in enumerate(self.support):
            if topology.taxa != self.taxa:
                raise TargetError(f"지지집합 {i}번 위상의 TaxonMap이 다릅니다.")
            if not topology.is_binary:
                raise TargetError(f"지지집합 {i}번 위상이 완전 해상되지 않았습니다.")
            if len(self.neighbors[i]) > self.total_nni_degree:
                raise TargetError(f"지지집합 {i}번 위상의 이웃 수가 2(n-3)을 넘습니다.")
            for j in self.neighbors[i]:
                if i not in self.neighbors[j]:
                    raise TargetError(f"이웃 관계가 대칭이 아닙니다: {i} -> {j}")
        if _component_labels(self.neighbors)[0] > 1:
            raise TargetError("지지집합이 NNI로 연결되어 있지 않습니다.")

    @classmethod
    def from_table(
        cls, topologies: Sequence[Topology], probs: Sequence[float]
    ) -> "CategoricalTreeDistribution":
        """위상과 확률 표에서 NNI 인접 구조를 계산하여 생성 (확률은 재정규화)"""
        if not topologies:
            raise TargetError("빈 목표 분포 표입니다.")
        probs = np.asarray(probs, dtype=float)
        taxa = topologies[0].taxa
        return cls(
            taxa=taxa,
            support=tuple(topologies),
            probs=probs / probs.sum(),
            neighbors=_restricted_neighbors(topologies),
        )

    @property
    def total_nni_degree(self) -> int:
        return 2 * (self.taxa.n_taxa - 3)

    def __len__(self) -> int:
        return len(self.support)

    @cached_property
    def index(self) -> dict[Topology, int]:
        return {topology: i for i, topology in enumerate(self.support)}

    @cached_property
    def cdf(self) -> np.ndarray:
        return np.cumsum(self.probs)

    @cached_property
    def log_probs(self) -> np.ndarray:
        return np.log(self.probs)

    @cached_property
    def full_neighbors(self) -> np.ndarray:
        """(지지집합 크기 x 2(n-3)) 전체 NNI 이웃 인덱스, 지지집합 밖은 -1"""
        table = np.full((len(self.support), self.total_nni_degree), -1, dtype=np.int64)
        for i, topology in enumerate(self.support):
            for j, neighbor in enumerate(nni_neighbors(topology)):
                table[i, j] = self.index.get(neighbor, -1)
        return table

    def prob(self, topology: Topology) -> float:
        """지지집합 밖의 위상은 확률 0"""
        i = self.index.get(topology)
        return 0.0 if i is None else float(self.probs[i])

    def draw_indices(self, u: np.ndarray) -> np.ndarray:
        """균등 난수의 역CDF 변환"""
        return np.minimum(np.searchsorted(self.cdf, u, side="right"), len(self.support) - 1)


def _restricted_neighbors(topologies: Sequence[Topology]) -> tuple[tuple[int, ...], ...]:
    index = {topology: i for i, topology in enumerate(topologies)}
    neighbors = []
    for topology in topologies:
        if not topology.is_binary:
            raise TargetError("목표 분포의 위상은 모두 완전 해상되어야 합니다.")
        found = (index.get(u) for u in nni_neighbors(topology))
        neighbors.append(tuple(j for j in found if j is not None))
    return tuple(neighbors)


def _component_labels(neighbors: Sequence[Sequence[int]]) -> tuple[int, np.ndarray]:
    size = len(neighbors)
    rows = [i for i, adjacent in enumerate(neighbors) for _ in adjacent]
    cols = [j for adjacent in neighbors for j in adjacent]
    graph = coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(size, size))
    return connected_components(graph, directed=False)


TargetInput = Union[
    Chain,
    TreeProbabilities,
    Mapping[Topology, float],
    Iterable[Topology],
    Iterable[tuple[Topology, float]],
]


def _aggregate(samples_or_table: TargetInput) -> tuple[list[Topology], np.ndarray]:
    """입력을 (첫 등장 순서의 고유 위상, 확률 추정값)으로 정리"""
    if isinstance(samples_or_table, Chain):
        samples_or_table = samples_or_table.samples
    if isinstance(samples_or_table, TreeProbabilities):
        samples_or_table = samples_or_table.probs
    if isinstance(samples_or_table, Mapping):
        samples_or_table = list(samples_or_table.items())

    weights: dict[Topology, float] = {}
    for item in samples_or_table:
        if isinstance(item, Topology):
            topology, weight = item, 1.0
        else:
            topology, weight = item
            if weight < 0:
                raise TargetError(f"확률은 음수일 수 없습니다: {weight}")
        weights[topology] = weights.get(topology, 0.0) + float(weight)

    weights = {t: w for t, w in weights.items() if w > 0}
    if not weights:
        raise TargetError("목표 분포를 만들 위상이 없습니다.")
    topologies = list(weights)
    probs = np.array([weights[t] for t in topologies])
    return topologies, probs / probs.sum()


def build_target(
    samples_or_table: TargetInput,
    hpd_mass: Optional[float] = None,
    max_support: Optional[int] = None,
) -> CategoricalTreeDistribution:
    """트리 표본 또는 (위상, 확률) 표로부터 연결된 범주형 목표 분포 생성

    1. 확률 내림차순 정렬 (동률은 입력 순서)
    2. 누적 확률이 hpd_mass 이상이 되는 최소 앞부분, 최대 max_support개
    3. NNI 인접 그래프의 최대 연결 성분 (동률: 확률 합, 가장 작은 인덱스)
    4. 재정규화
    """
    hpd_mass = settings.hpd_mass if hpd_mass is None else hpd_mass
    max_support = settings.max_support if max_support is None else max_support
    if not 0 < hpd_mass <= 1:
        raise ValueError(f"hpd_mass는 (0, 1] 범위여야 합니다: {hpd_mass}")
    if max_support < 1:
        raise ValueError(f"max_support는 1 이상이어야 합니다: {max_support}")

    topologies, probs = _aggregate(samples_or_table)
    for topology in topologies:
        if not topology.is_binary:
            raise TargetError("목표 분포의 위상은 모두 완전 해상되어야 합니다.")

    order = np.argsort(-probs, kind="stable")
    cumulative = np.cumsum(probs[order])
    reached = np.flatnonzero(cumulative >= hpd_mass - 1e-12)
    keep = (reached[0] + 1) if len(reached) else len(order)
    keep = min(keep, max_support)
    retained = [topologies[i] for i in order[:keep]]
    retained_probs = probs[order[:keep]]

    neighbors = _restricted_neighbors(retained)
    n_components, labels = _component_labels(neighbors)
    if n_components > 1:
        sizes = np.bincount(labels)
        masses = np.bincount(labels, weights=retained_probs)
        first = np.array([np.flatnonzero(labels == c)[0] for c in range(n_components)])
        best = max(range(n_components), key=lambda c: (sizes[c], masses[c], -first[c]))
        members = np.flatnonzero(labels == best)
        logger.info(
            f"연결 성분 {n_components}개 중 최대 성분만 유지: "
            f"{len(members)}/{keep}개 위상, 확률 {masses[best]:.4f}"
        )
        retained = [retained[i] for i in members]
        retained_probs = retained_probs[members]

    target = CategoricalTreeDistribution.from_table(retained, retained_probs)
    logger.info(f"목표 분포 생성: 위상 {len(target)}개 (입력 {len(topologies)}개)")
    return target


def load_target(path: Path) -> CategoricalTreeDistribution:
    """newick, probability 컬럼 TSV에서 목표 분포 읽기 (합 ≈ 1 검증 후 재정규화)"""
    frame = pd.read_csv(path, sep="\t", comment="#")
    missing = {"newick", "probability"} - set(frame.columns)
    if missing:
        raise TargetError(f"{path}: 필요한 컬럼이 없습니다: {sorted(missing)}")
    if frame.empty:
        raise TargetError(f"{path}: 목표 분포 표가 비어 있습니다.")

    probs = frame["probability"].to_numpy(dtype=float)
    if abs(probs.sum() - 1.0) > 1e-6:
        raise TargetError(f"{path}: 확률 합 {probs.sum():.8f}이 1과 다릅니다 (허용오차 1e-6).")

    taxa = None
    topologies = []
    for text in frame["newick"]:
        topology = parse_newick(str(text), taxa)
        taxa = topology.taxa
        topologies.append(topology)
    if len(set(topologies)) != len(topologies):
        raise TargetError(f"{path}: 중복된 위상이 있습니다.")
    return CategoricalTreeDistribution.from_table(topologies, probs)


def write_target(target: CategoricalTreeDistribution, path: Path):
    frame = pd.DataFrame(
        {
            "newick": [serialize_newick(t) for t in target.support],
            "probability": target.probs,
        }
    )
    frame.to_csv(path, sep="\t", index=False, float_format="%.17g")


def _caterpillar(taxa: TaxonMap) -> Topology:
    n = taxa.n_taxa
    # {0,1} | 나머지, {0,1,2} | 나머지, ...
    masks = [(1 << k) - 1 for k in range(2, n - 1)]
    return Topology.from_masks(taxa, masks)


def toy_target(n_topologies: int = 25, decay: float = 0.88) -> CategoricalTreeDistribution:
    """6분류군 캐터필러에서 NNI 너비 우선 탐색으로 모은 연결 목표 분포

    k번째로 방문한 위상의 확률은 decay**k에 비례한다.
    """
    taxa = TaxonMap(tuple("ABCDEF"))
    start = _caterpillar(taxa)
    visited = {start: 0}
    queue = deque([start])
    while queue and len(visited) < n_topologies:
        current = queue.popleft()
        for neighbor in nni_neighbors(current):
            if neighbor not in visited and len(visited) < n_topologies:
                visited[neighbor] = len(visited)
                queue.append(neighbor)

    topologies = list(visited)
    weights = decay ** np.arange(len(topologies))
    return CategoricalTreeDistribution.from_table(topologies, weights)


def two_mode_target(bridge_prob: float = 0.01) -> CategoricalTreeDistribution:
    """5분류군 위상 두 개(RF 4)를 확률이 낮은 다리 위상 하나로 연결한 목표 분포"""
    if not 0 < bridge_prob < 1:
        raise ValueError(f"bridge_prob는 (0, 1) 범위여야 합니다: {bridge_prob}")
    taxa = TaxonMap(tuple("ABCDE"))
    a, b, c, d, e = (1 << i for i in range(5))
    left = Topology.from_masks(taxa, [a | b, d | e])
    bridge = Topology.from_masks(taxa, [a | b, c | d])
    right = Topology.from_masks(taxa, [c | d, b | e])
    mode = (1.0 - bridge_prob) / 2
    return CategoricalTreeDistribution.from_table([left, bridge, right], [mode, bridge_prob, mode])
