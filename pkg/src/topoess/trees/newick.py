"""
Newick 파서 / 직렬화
"""

import logging
import re
from typing import Optional

import dendropy

from ..errors import NewickParseError, TaxonMismatchError
from ..models.tree import TaxonMap, Topology

logger = logging.getLogger(__name__)

# 따옴표가 필요한 라벨 문자
_NEEDS_QUOTES = re.compile(r"[\s(),:;\[\]']")


def parse_newick(text: str, taxa: Optional[TaxonMap] = None) -> Topology:
    """Newick 문자열 하나를 무근 위상으로 파싱

    가지 길이와 내부 노드 라벨은 버린다. 유근 트리는 무근으로 취급하며,
    루트의 자명한 이분할은 분할을 만들지 않는다.

    Args:
        text: Newick 문자열 (';'로 끝남)
        taxa: 주어지면 잎 라벨 집합이 정확히 일치해야 함
    """
    text = text.strip()
    if not text:
        raise NewickParseError("빈 Newick 문자열입니다.")

    try:
        trees = dendropy.TreeList.get(
            data=text,
            schema="newick",
            taxon_namespace=dendropy.TaxonNamespace(is_case_sensitive=True),
            preserve_underscores=True,
            case_sensitive_taxon_labels=True,
            suppress_internal_node_taxa=True,
        )
    except Exception as e:
        raise NewickParseError(f"Newick 문법 오류: {e}") from e

    if len(trees) != 1:
        raise NewickParseError(f"트리 하나를 기대했지만 {len(trees)}개를 읽었습니다.")
    tree = trees[0]

    labels = []
    for leaf in tree.leaf_node_iter():
        if leaf.taxon is None or not leaf.taxon.label:
            raise NewickParseError("라벨이 없는 잎 노드가 있습니다.")
        labels.append(leaf.taxon.label)

    if len(set(labels)) != len(labels):
        duplicated = sorted({label for label in labels if labels.count(label) > 1})
        raise NewickParseError(f"중복된 잎 라벨: {', '.join(duplicated)}")
    if len(labels) < 3:
        raise NewickParseError(f"잎이 3개 이상이어야 합니다 (현재 {len(labels)}개).")

    if taxa is None:
        taxa = TaxonMap.from_labels(labels)
    elif set(labels) != set(taxa.names):
        missing = set(taxa.names) - set(labels)
        extra = set(labels) - set(taxa.names)
        raise TaxonMismatchError(
            f"잎 라벨이 TaxonMap과 다릅니다 (누락 {sorted(missing)}, 초과 {sorted(extra)})"
        )

    index = taxa.index
    node_masks = {}
    masks = []
    for node in tree.postorder_node_iter():
        if node.is_leaf():
            mask = 1 << index[node.taxon.label]
        else:
            mask = 0
            for child in node.child_node_iter():
                mask |= node_masks[child]
        node_masks[node] = mask
        masks.append(mask)

    return Topology.from_masks(taxa, masks)


def cluster_children(topology: Topology) -> dict[int, list[int]]:
    """taxon 0에 뿌리를 둔 클러스터 트리의 자식 목록

    키는 taxon 0을 제외한 모든 분류군 클러스터(루트)와 각 분할 마스크이며,
    값은 자식 클러스터 (단일 분류군은 1비트 마스크) 목록이다.
    """
    n = topology.n_taxa
    root = topology.taxa.full_mask ^ 1
    clusters = sorted(topology.masks, key=lambda m: (m.bit_count(), m))
    clusters.append(root)

    owner = {i: 1 << i for i in range(1, n)}
    children = {}
    for cluster in clusters:
        kids = []
        seen = set()
        mask, i = cluster, 0
        while mask:
            if mask & 1:
                top = owner[i]
                if top not in seen:
                    seen.add(top)
                    kids.append(top)
                owner[i] = cluster
            mask >>= 1
            i += 1
        kids.sort(key=_lowest_bit)
        children[cluster] = kids
    return children


def _lowest_bit(mask: int) -> int:
    return (mask & -mask).bit_length()


def _quote_label(label: str) -> str:
    if _NEEDS_QUOTES.search(label):
        return "'" + label.replace("'", "''") + "'"
    return label


def serialize_newick(topology: Topology) -> str:
    """위상을 가지 길이 없는 Newick 문자열로 변환 (TaxonMap 순서 기준 결정적)"""
    names = topology.taxa.names
    children = cluster_children(topology)

    rendered = {1 << i: _quote_label(names[i]) for i in range(1, len(names))}
    # 자식은 항상 부모보다 작으므로 오름차순 처리로 재귀 없이 조립
    for cluster, kids in children.items():
        parts = ",".join(rendered[kid] for kid in kids)
        rendered[cluster] = f"({parts})"

    root = topology.taxa.full_mask ^ 1
    inner = ",".join(rendered[kid] for kid in children[root])
    return f"({_quote_label(names[0])},{inner});"
