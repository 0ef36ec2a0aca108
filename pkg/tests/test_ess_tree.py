"""
위상 ESS 추정기 테스트
"""

import pytest
import numpy as np
from scipy import signal

import sys
sys.path.insert(0, "src")

from topoess.distance.frechet import distance_matrix
from topoess.distance.matrix import DistanceMatrix
from topoess.errors import InsufficientSamplesError
from topoess.ess.estimators import ESTIMATORS, compute_ess, get_estimator
from topoess.ess.tree import (
    _first_crossing,
    _smoothed_crossing,
    cmds_ess,
    fixed_n_ess,
    folded_rank_medoid_ess,
    frechet_correlation_ess,
    jump_distance_ess,
    jump_profile,
    log_posterior_ess,
    pseudo_ess,
    split_frequency_ess,
    total_distance_ess,
)
from topoess.ess.univariate import (
    ar_spectrum_ess,
    autocorrelations,
    batch_means_ess,
    sum_of_correlations_ess,
)
from topoess.models.ess import TreeEssMethod
from topoess.models.tree import Chain, Topology
from topoess.simulation.sampler import iid_sample, run_chain
from topoess.simulation.target import two_mode_target
from topoess.trees.newick import parse_newick

IID_METHODS = [
    TreeEssMethod.FRECHET_CORRELATION,
    TreeEssMethod.SPLIT_FREQUENCY,
    TreeEssMethod.MEDIAN_PSEUDO,
    TreeEssMethod.FOLDED_RANK_MEDOID,
    TreeEssMethod.TOTAL_DISTANCE,
    TreeEssMethod.CMDS,
]


class TestDegenerate:
    """모든 표본이 같은 체인 테스트"""

    def test_all_methods(self, constant_chain):
        results = compute_ess(constant_chain, list(TreeEssMethod), seed=1)
        for method, estimate in results.items():
            if method == TreeEssMethod.FIXED_N:
                assert estimate.value == len(constant_chain)
            else:
                assert estimate.value == 1.0, method
                assert estimate.degenerate, method


class TestIidChains:
    """독립 표본 체인에서 ESS ≈ n"""

    @pytest.mark.slow
    def test_iid_close_to_n(self, toy):
        """100회 중 90% 이상에서 ESS ≥ 0.7n"""
        n = 1000
        passed = {method: 0 for method in IID_METHODS}
        draws = 100
        for seed in range(draws):
            chain = iid_sample(toy, n, seed=seed)
            results = compute_ess(chain, IID_METHODS + [TreeEssMethod.MIN_PSEUDO])
            for method in IID_METHODS:
                passed[method] += results[method].value >= 0.7 * n
            assert results[TreeEssMethod.MIN_PSEUDO].value <= results[TreeEssMethod.MEDIAN_PSEUDO].value
        for method, count in passed.items():
            assert count >= 0.9 * draws, method

    def test_log_posterior(self, toy):
        chain = iid_sample(toy, 1000, seed=11)
        assert log_posterior_ess(chain).value >= 700

    def test_jump_bounds(self, toy):
        chain = iid_sample(toy, 500, seed=3)
        d = distance_matrix(chain)
        for smoothed in (True, False):
            ess = jump_distance_ess(d, smoothed=smoothed, seed=5)
            assert 1.0 <= ess.value <= 500


class TestFrechetCorrelation:
    """프레셰 상관 ESS 테스트"""

    def test_block_chain(self, taxa4):
        """길이 L 블록을 반복하는 두 위상 체인은 지시열 ESS와 같은 규모"""
        t = parse_newick("((A,B),(C,D));", taxa4)
        u = parse_newick("((A,C),(B,D));", taxa4)
        L, n = 20, 2000
        indicator = (np.arange(n) // L) % 2
        chain = Chain(taxa=taxa4, samples=[u if k else t for k in indicator])
        expected = sum_of_correlations_ess(autocorrelations(indicator.astype(float))).value
        value = frechet_correlation_ess(distance_matrix(chain)).value
        assert expected / 2 <= value <= expected * 2
        assert value < n / 5

    def test_two_mode_low_ess(self):
        chain = run_chain(two_mode_target(), 2000, seed=7)
        value = frechet_correlation_ess(distance_matrix(chain)).value
        assert value < 0.2 * len(chain)

    def test_too_short(self, taxa4):
        t = parse_newick("((A,B),(C,D));", taxa4)
        with pytest.raises(InsufficientSamplesError):
            frechet_correlation_ess(distance_matrix(Chain(taxa=taxa4, samples=[t] * 3)))


class TestSplitFrequency:
    """분할 빈도 ESS 테스트"""

    def test_single_varying_split(self, taxa5, rng):
        """분할 하나만 변하면 그 지시열의 배치 평균 ESS와 같음"""
        a, b, c, d, e = (1 << i for i in range(5))
        resolved = Topology.from_masks(taxa5, [a | b, d | e])
        partial = Topology.from_masks(taxa5, [a | b])
        # 지속성이 있는 두 상태 마르코프 열
        flips = rng.random(500) < 0.1
        state = np.cumsum(flips) % 2
        chain = Chain(taxa=taxa5, samples=[resolved if s else partial for s in state])
        expected = batch_means_ess(state.astype(float)).value
        assert split_frequency_ess(chain).value == pytest.approx(expected, rel=1e-9)


class TestPseudoEss:
    """의사 ESS 테스트"""

    def test_min_not_above_median(self, toy):
        chain = run_chain(toy, 5000, thin=10, seed=2)
        d = distance_matrix(chain)
        assert pseudo_ess(d, "min").value <= pseudo_ess(d, "median").value

    def test_bad_aggregate(self, toy):
        d = distance_matrix(iid_sample(toy, 20, seed=1))
        with pytest.raises(ValueError):
            pseudo_ess(d, "mean")


class TestFoldedRankMedoid:
    """접힌 순위 메도이드 ESS 테스트"""

    @pytest.mark.parametrize("factor", [0.37, 2.0, 1e3])
    def test_rank_invariance(self, toy, factor):
        """거리에 양수를 곱해도 결과가 비트 단위로 같음"""
        d = distance_matrix(run_chain(toy, 3000, thin=10, seed=4))
        assert folded_rank_medoid_ess(d.scaled(factor)).value == folded_rank_medoid_ess(d).value


class TestReversal:
    """체인 역순 불변성"""

    @pytest.fixture
    def distances(self, toy):
        return distance_matrix(run_chain(toy, 10000, thin=10, seed=21))

    def test_frechet_exact(self, distances):
        forward = frechet_correlation_ess(distances).value
        assert frechet_correlation_ess(distances.reversed()).value == pytest.approx(forward, rel=1e-12)

    @pytest.mark.parametrize(
        "estimate",
        [
            lambda d: pseudo_ess(d, "median"),
            lambda d: pseudo_ess(d, "min"),
            total_distance_ess,
            cmds_ess,
        ],
        ids=["medianPseudo", "minPseudo", "totalDistance", "cmds"],
    )
    def test_within_tolerance(self, distances, estimate):
        forward = estimate(distances).value
        assert estimate(distances.reversed()).value == pytest.approx(forward, rel=0.05)


class TestCmds:
    """CMDS ESS 테스트"""

    def test_euclidean_scalar(self, rng):
        """1차원 유클리드 거리의 첫 좌표는 중심화된 원래 값"""
        e = rng.standard_normal(300)
        x = signal.lfilter([1.0], [1.0, -0.5], e)
        d = DistanceMatrix.from_array(np.abs(np.subtract.outer(x, x)))
        assert cmds_ess(d).value == pytest.approx(ar_spectrum_ess(x).value, rel=1e-6)


class TestJumpDistance:
    """점프 거리 부트스트랩 ESS 테스트"""

    def test_first_crossing(self):
        profile = np.array([0.0, 1.0, 1.0, 3.0, 3.0])
        assert _first_crossing(profile, 2.0) == 3
        assert _first_crossing(profile, 1.0) == 3
        assert _first_crossing(profile, 5.0) is None

    def test_smoothed_crossing(self):
        profile = np.array([0.0, 1.0, 1.0, 3.0, 3.0])
        assert _smoothed_crossing(profile, 2.0) == pytest.approx(2.0)
        assert _smoothed_crossing(profile, 1.0) == pytest.approx(1.0)
        assert _smoothed_crossing(profile, 5.0) is None

    def test_profile_monotone(self, toy):
        profile = jump_profile(distance_matrix(run_chain(toy, 2000, seed=8)))
        assert profile[0] == 0.0
        assert np.all(np.diff(profile) >= 0)

    def test_reproducible(self, toy):
        d = distance_matrix(run_chain(toy, 2000, seed=9))
        assert jump_distance_ess(d, seed=3).value == jump_distance_ess(d, seed=3).value

    def test_invalid_alpha(self, toy):
        d = distance_matrix(iid_sample(toy, 20, seed=1))
        with pytest.raises(ValueError):
            jump_distance_ess(d, alpha=1.5)


class TestBaselines:
    """fixedN / logPosterior 테스트"""

    def test_fixed_n(self, toy):
        chain = iid_sample(toy, 1000, seed=1)
        assert fixed_n_ess(chain).value == 1000
        assert fixed_n_ess(chain.reversed()).value == 1000

    def test_fixed_n_single(self, toy):
        assert fixed_n_ess(iid_sample(toy, 1, seed=1)).value == 1

    def test_log_posterior_missing(self, toy):
        chain = iid_sample(toy, 20, seed=1)
        chain.log_density = None
        with pytest.raises(ValueError):
            log_posterior_ess(chain)


class TestEstimators:
    """추정기 레지스트리 테스트"""

    def test_registry(self):
        assert set(ESTIMATORS) == set(TreeEssMethod)
        assert get_estimator(TreeEssMethod.CMDS).name == "cmds"
        assert not get_estimator(TreeEssMethod.SPLIT_FREQUENCY).needs_distances

    def test_bounds_on_mcmc_chain(self, toy):
        """모든 방법의 ESS는 [1, n]"""
        chain = run_chain(toy, 20000, thin=20, seed=12)
        n = len(chain)
        for method, estimate in compute_ess(chain, list(TreeEssMethod), seed=4).items():
            assert 1.0 <= estimate.value <= n, method
            assert estimate.n == n

    def test_parse(self):
        assert TreeEssMethod.parse("minPseudo") == TreeEssMethod.MIN_PSEUDO
        with pytest.raises(ValueError):
            TreeEssMethod.parse("bogus")
