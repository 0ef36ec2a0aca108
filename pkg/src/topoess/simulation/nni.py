"""
NNI (nearest neighbor interchange) 이웃 열거
"""

from ..models.tree import Split, Topology
from ..trees.newick import cluster_children


def nni_neighbors(t: Topology) -> list[Topology]:
    """완전 해상 위상의 2(n-3)개 NNI 이웃

    내부 가지 X = A ∪ B (부모 클러스터 P, 형제 S = P \\ X)에서
    분할 X를 A ∪ S 또는 B ∪ S로 바꾼 두 위상을 만든다. 다른 분할은 그대로다.
    순서는 분할 마스크 오름차순, 같은 가지 안에서는 A, B 순으로 결정적이다.
    """
    if not t.is_binary:
        raise ValueError(
            f"NNI 이웃은 완전 해상 위상에서만 정의됩니다 (분할 {len(t.splits)}개, 필요 {t.n_taxa - 3}개)."
        )

    children = cluster_children(t)
    parent = {}
    for cluster, kids in children.items():
        for kid in kids:
            parent[kid] = cluster

    neighbors = []
    for mask in t.masks:
        first, second = children[mask]
        sibling = parent[mask] ^ mask
        rest = t.splits - {Split(mask)}
        for kept in (first, second):
            swapped = Split(kept | sibling)
            neighbors.append(Topology(t.taxa, rest | {swapped}))
    return neighbors
