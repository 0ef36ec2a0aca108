"""
스칼라 ESS 커널 테스트
"""

import pytest
import numpy as np
from scipy import signal

import sys
sys.path.insert(0, "src")

from topoess.errors import DegenerateSeriesError, InsufficientSamplesError
from topoess.ess.univariate import (
    ar_spectrum_ess,
    autocorrelations,
    batch_means_ess,
    batch_means_limiting_variance,
    sum_of_correlations_ess,
)
from topoess.models.ess import AutocorrSeries


def ar1(phi: float, n: int, rng: np.random.Generator) -> np.ndarray:
    """정상 상태에서 시작하는 AR(1) 시계열 (혁신 분산 1)"""
    e = rng.standard_normal(n)
    e[0] /= np.sqrt(1.0 - phi**2)
    return signal.lfilter([1.0], [1.0, -phi], e)


def ar1_ess(phi: float, n: int) -> float:
    return n * (1 - phi) / (1 + phi)


class TestAutocorrelations:
    """자기상관 추정 테스트"""

    def test_white_noise(self, rng):
        a = autocorrelations(rng.standard_normal(10000))
        assert a.rho[0] == 1.0
        assert abs(a.rho[1]) < 0.03

    def test_ar1(self, rng):
        a = autocorrelations(ar1(0.8, 10000, rng))
        assert a.rho[1] == pytest.approx(0.8, abs=0.03)

    def test_length(self, rng):
        a = autocorrelations(rng.standard_normal(50))
        assert len(a.rho) == 49
        assert a.n == 50

    def test_constant(self):
        with pytest.raises(DegenerateSeriesError):
            autocorrelations(np.ones(20))

    def test_too_short(self):
        with pytest.raises(InsufficientSamplesError):
            autocorrelations([1.0, 2.0, 3.0])


class TestSumOfCorrelations:
    """sum-of-correlations ESS 테스트"""

    def test_independent(self):
        """ρ_s = 0 (s >= 1)이면 ESS = n"""
        rho = np.zeros(99)
        rho[0] = 1.0
        assert sum_of_correlations_ess(AutocorrSeries(rho=rho, n=100)).value == 100.0

    @pytest.mark.parametrize("phi", [0.2, 0.5, 0.8])
    def test_ar1(self, rng, phi):
        n = 20000
        ess = sum_of_correlations_ess(autocorrelations(ar1(phi, n, rng)))
        assert ess.value == pytest.approx(ar1_ess(phi, n), rel=0.15)

    def test_near_constant_walk(self, rng):
        """자기상관이 강한 랜덤워크는 작은 ESS"""
        x = np.cumsum(rng.standard_normal(2000))
        ess = sum_of_correlations_ess(autocorrelations(x))
        assert 1.0 <= ess.value < 100

    def test_non_positive_denominator(self):
        rho = np.array([1.0, -0.9, 0.0, 0.0])
        assert sum_of_correlations_ess(AutocorrSeries(rho=rho, n=5)).value == 5.0


class TestArSpectrum:
    """AR 스펙트럼 ESS 테스트"""

    def test_white_noise(self, rng):
        n = 10000
        ess = ar_spectrum_ess(rng.standard_normal(n))
        assert 0.8 * n <= ess.value <= n

    @pytest.mark.parametrize("phi", [0.2, 0.5, 0.8])
    def test_ar1(self, rng, phi):
        n = 20000
        ess = ar_spectrum_ess(ar1(phi, n, rng))
        assert ess.value == pytest.approx(ar1_ess(phi, n), rel=0.15)

    def test_constant(self):
        ess = ar_spectrum_ess(np.full(100, 3.0))
        assert ess.value == 1.0
        assert ess.degenerate

    def test_affine_invariance(self, rng):
        x = ar1(0.5, 2000, rng)
        assert ar_spectrum_ess(3.0 * x - 7.0).value == pytest.approx(ar_spectrum_ess(x).value, rel=1e-8)
        assert sum_of_correlations_ess(autocorrelations(-2.0 * x + 1.0)).value == pytest.approx(
            sum_of_correlations_ess(autocorrelations(x)).value, rel=1e-8
        )

    def test_too_short(self):
        with pytest.raises(InsufficientSamplesError):
            ar_spectrum_ess(np.arange(7.0))


class TestBatchMeans:
    """배치 평균 극한분산 테스트"""

    def test_iid_variance(self, rng):
        lam = batch_means_limiting_variance(rng.standard_normal(1_000_000))
        assert lam == pytest.approx(1.0, rel=0.25)

    def test_ar1_variance(self, rng):
        phi = 0.5
        x = ar1(phi, 1_000_000, rng)
        stationary = 1.0 / (1.0 - phi**2)
        expected = stationary * (1 + phi) / (1 - phi)
        assert batch_means_limiting_variance(x) == pytest.approx(expected, rel=0.25)

    def test_constant_floor(self):
        from topoess.config import settings

        assert batch_means_limiting_variance(np.ones(100)) == settings.variance_floor
        assert batch_means_ess(np.ones(100)).value == 1.0

    def test_iid_ess(self, rng):
        n = 40000
        ess = batch_means_ess(rng.standard_normal(n))
        assert 0.5 * n <= ess.value <= n

    def test_too_short(self):
        with pytest.raises(InsufficientSamplesError):
            batch_means_ess(np.arange(15.0))
