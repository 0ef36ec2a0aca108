"""
공용 테스트 픽스처
"""

import sys
from itertools import combinations

import numpy as np
import pytest

sys.path.insert(0, "src")

from topoess.models.tree import Chain, Split, TaxonMap, Topology
from topoess.simulation.target import CategoricalTreeDistribution, toy_target
from topoess.trees.newick import parse_newick


def random_newick(labels, rng: np.random.Generator) -> str:
    """무작위 병합으로 만든 완전 해상 Newick 문자열"""
    nodes = list(labels)
    while len(nodes) > 3:
        i, j = sorted(rng.choice(len(nodes), size=2, replace=False))
        merged = f"({nodes[i]},{nodes[j]})"
        nodes = [node for k, node in enumerate(nodes) if k not in (i, j)] + [merged]
    return "(" + ",".join(nodes) + ");"


def random_topology(taxa: TaxonMap, rng: np.random.Generator) -> Topology:
    return parse_newick(random_newick(taxa.names, rng), taxa)


def all_binary_topologies(taxa: TaxonMap) -> list[Topology]:
    """서로 호환되는 비자명 분할 n-3개 조합으로 모든 완전 해상 위상 열거"""
    n = taxa.n_taxa
    candidates = [
        Split(mask)
        for mask in range(1, 1 << n)
        if not mask & 1 and not Split(mask).is_trivial(n)
    ]
    topologies = []
    for combo in combinations(candidates, n - 3):
        if all(a.is_compatible(b, n) for a, b in combinations(combo, 2)):
            topologies.append(Topology(taxa, frozenset(combo)))
    return topologies


@pytest.fixture
def taxa4():
    return TaxonMap(tuple("ABCD"))


@pytest.fixture
def taxa5():
    return TaxonMap(tuple("ABCDE"))


@pytest.fixture
def taxa8():
    return TaxonMap(tuple("ABCDEFGH"))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def toy():
    return toy_target()


@pytest.fixture
def four_taxon_target(taxa4):
    """4분류군 위상 3개, 확률 (0.5, 0.3, 0.2)"""
    topologies = [
        parse_newick("((A,B),(C,D));", taxa4),
        parse_newick("((A,C),(B,D));", taxa4),
        parse_newick("((A,D),(B,C));", taxa4),
    ]
    return CategoricalTreeDistribution.from_table(topologies, [0.5, 0.3, 0.2])


@pytest.fixture
def constant_chain(taxa5):
    t = parse_newick("((A,B),C,(D,E));", taxa5)
    return Chain(taxa=taxa5, samples=[t] * 50, log_density=np.zeros(50), name="constant")


@pytest.fixture
def make_topology():
    return random_topology


@pytest.fixture
def enumerate_topologies():
    return all_binary_topologies
