"""
RF 거리 / 거리 행렬 / 프레셰 통계량 테스트
"""

import pytest
import numpy as np

import sys
sys.path.insert(0, "src")

from topoess.distance.frechet import distance_matrix, frechet_variance, medoid_indices
from topoess.distance.matrix import DistanceMatrix
from topoess.distance.rf import rf_distance
from topoess.errors import InsufficientSamplesError, TaxonMismatchError
from topoess.models.tree import Chain, TaxonMap
from topoess.simulation.nni import nni_neighbors
from topoess.trees.newick import parse_newick


def caterpillar_newick(labels) -> str:
    text = f"({labels[0]},{labels[1]})"
    for label in labels[2:]:
        text = f"({text},{label})"
    return text + ";"


class TestRfDistance:
    """Robinson-Foulds 거리 테스트"""

    def test_nni_neighbor_is_two(self, taxa8, rng, make_topology):
        t = make_topology(taxa8, rng)
        for u in nni_neighbors(t):
            assert rf_distance(t, u) == 2

    def test_maximum_distance(self):
        """분할을 공유하지 않는 10분류군 트리는 2·10 - 6"""
        taxa = TaxonMap(tuple("ABCDEFGHIJ"))
        a = parse_newick(caterpillar_newick("ABCDEFGHIJ"), taxa)
        b = parse_newick(caterpillar_newick("ACEGIBDFHJ"), taxa)
        assert rf_distance(a, b) == 14

    def test_identity_and_symmetry(self, taxa8, rng, make_topology):
        a, b = make_topology(taxa8, rng), make_topology(taxa8, rng)
        assert rf_distance(a, a) == 0
        assert rf_distance(a, b) == rf_distance(b, a)

    def test_triangle_inequality(self, taxa8, rng, make_topology):
        for _ in range(300):
            a, b, c = (make_topology(taxa8, rng) for _ in range(3))
            assert rf_distance(a, c) <= rf_distance(a, b) + rf_distance(b, c)

    def test_taxon_mismatch(self, taxa4):
        a = parse_newick("((A,B),(C,D));", taxa4)
        b = parse_newick("((A,B),(C,E));")
        with pytest.raises(TaxonMismatchError):
            rf_distance(a, b)

    def test_indicator_hamming_oracle(self, taxa8, rng, make_topology):
        """분할 지시 벡터의 해밍 거리와 정확히 일치"""
        mismatches = 0
        for _ in range(1000):
            a, b = make_topology(taxa8, rng), make_topology(taxa8, rng)
            space = sorted(a.splits | b.splits)
            va = np.array([s in a.splits for s in space])
            vb = np.array([s in b.splits for s in space])
            mismatches += rf_distance(a, b) != int(np.sum(va != vb))
        assert mismatches == 0


class TestDistanceMatrix:
    """체인 거리 행렬 테스트"""

    def test_identical_chain(self, constant_chain):
        d = distance_matrix(constant_chain)
        assert not d.values.any()
        assert d.is_constant

    def test_three_samples(self, taxa4):
        t = parse_newick("((A,B),(C,D));", taxa4)
        u = parse_newick("((A,C),(B,D));", taxa4)
        d = distance_matrix(Chain(taxa=taxa4, samples=[t, u, t]))
        assert d.values.tolist() == [[0, 2, 0], [2, 0, 2], [0, 2, 0]]

    def test_matches_pairwise(self, taxa8, rng, make_topology):
        """고유 위상 압축과 무관하게 쌍별 계산과 일치"""
        pool = [make_topology(taxa8, rng) for _ in range(30)]
        samples = [pool[i] for i in rng.integers(0, len(pool), size=100)]
        d = distance_matrix(Chain(taxa=taxa8, samples=samples))
        expected = [[rf_distance(a, b) for b in samples] for a in samples]
        np.testing.assert_array_equal(d.values, expected)

    def test_empty_chain(self, taxa4):
        with pytest.raises(InsufficientSamplesError):
            distance_matrix(Chain(taxa=taxa4, samples=[]))

    def test_lag_and_row_sums(self):
        d = DistanceMatrix.from_array(np.abs(np.subtract.outer(np.arange(5), np.arange(5))))
        assert d.lag(2).tolist() == [2, 2, 2]
        np.testing.assert_array_equal(d.row_sums, d.values.sum(axis=1))

    def test_upper_squared_sums(self, rng):
        x = rng.normal(size=40)
        d = DistanceMatrix.from_array(np.abs(np.subtract.outer(x, x)))
        col, row = d.upper_squared_sums()
        upper = np.triu(d.values**2, k=1)
        np.testing.assert_allclose(col, upper.sum(axis=0))
        np.testing.assert_allclose(row, upper.sum(axis=1))

    def test_from_array_validation(self):
        with pytest.raises(ValueError):
            DistanceMatrix.from_array(np.zeros((2, 3)))
        with pytest.raises(ValueError):
            DistanceMatrix.from_array(np.array([[0, 1], [2, 0]]))
        with pytest.raises(ValueError):
            DistanceMatrix.from_array(np.array([[1, 1], [1, 0]]))

    def test_to_tsv(self, tmp_path, taxa4):
        t = parse_newick("((A,B),(C,D));", taxa4)
        u = parse_newick("((A,C),(B,D));", taxa4)
        path = tmp_path / "d.tsv"
        distance_matrix(Chain(taxa=taxa4, samples=[t, u])).to_tsv(path)
        lines = path.read_text(encoding="utf-8").splitlines()
        assert lines[1].split("\t") == ["0", "0", "2"]


class TestFrechet:
    """프레셰 분산 / 메도이드 테스트"""

    def test_identical_subset(self, constant_chain):
        assert frechet_variance(distance_matrix(constant_chain)) == 0.0

    def test_two_trees(self, taxa4):
        t = parse_newick("((A,B),(C,D));", taxa4)
        u = parse_newick("((A,C),(B,D));", taxa4)
        d = distance_matrix(Chain(taxa=taxa4, samples=[t, u, t]))
        assert frechet_variance(d, [0, 1]) == pytest.approx(2.0)

    def test_needs_two(self, constant_chain):
        with pytest.raises(InsufficientSamplesError):
            frechet_variance(distance_matrix(constant_chain), [0])

    def test_euclidean_scalar_variance(self, rng):
        """유클리드 거리의 스칼라 표본은 표본분산과 같음"""
        x = rng.standard_normal(2000)
        d = DistanceMatrix.from_array(np.abs(np.subtract.outer(x, x)))
        assert frechet_variance(d) == pytest.approx(x.var(ddof=1), rel=1e-9)
        assert frechet_variance(d) == pytest.approx(1.0, abs=0.1)

    def test_medoid(self, taxa4):
        t = parse_newick("((A,B),(C,D));", taxa4)
        u = parse_newick("((A,C),(B,D));", taxa4)
        d = distance_matrix(Chain(taxa=taxa4, samples=[t, t, t, u]))
        assert medoid_indices(d).tolist() == [0, 1, 2]

    def test_medoid_all_identical(self, constant_chain):
        d = distance_matrix(constant_chain)
        assert medoid_indices(d).tolist() == list(range(len(constant_chain)))
