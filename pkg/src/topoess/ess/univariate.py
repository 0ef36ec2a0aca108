"""
스칼라 시계열 ESS 커널

- sum_of_correlations_ess: 인접 자기상관 쌍의 합 + 단조 평활 + 양수 구간 절단
- ar_spectrum_ess: AR 모형의 주파수 0 스펙트럼 (R coda의 effectiveSize 방식)
- batch_means_*: 배치 평균 극한분산 (lobed 추정량)
"""

import math

import numpy as np
from scipy import fft

from ..config import settings
from ..errors import DegenerateSeriesError, InsufficientSamplesError
from ..models.ess import AutocorrSeries, EssEstimate


def _as_series(x, min_length: int, name: str) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValueError(f"{name}: 1차원 시계열이 필요합니다 (shape {x.shape})")
    if len(x) < min_length:
        raise InsufficientSamplesError(
            f"{name}: 표본이 {min_length}개 이상 필요합니다 (현재 {len(x)}개)."
        )
    return x


def _is_constant(x: np.ndarray) -> bool:
    return bool(np.all(x == x[0]))


def _autocovariance(x: np.ndarray, max_lag: int) -> np.ndarray:
    """FFT로 계산한 표본 자기공분산 (분모 n), 시차 0..max_lag"""
    n = len(x)
    centered = x - x.mean()
    size = fft.next_fast_len(2 * n)
    spectrum = fft.rfft(centered, size)
    acov = fft.irfft(spectrum * np.conj(spectrum), size)[: max_lag + 1]
    return acov / n


def autocorrelations(x) -> AutocorrSeries:
    """시차 0..n-2의 표본 자기상관"""
    x = _as_series(x, 4, "autocorrelations")
    if _is_constant(x):
        raise DegenerateSeriesError("상수 시계열은 자기상관이 정의되지 않습니다.")
    n = len(x)
    acov = _autocovariance(x, n - 2)
    rho = acov / acov[0]
    rho[0] = 1.0
    return AutocorrSeries(rho=rho, n=n)


def sum_of_correlations_ess(a: AutocorrSeries, method: str = "sumOfCorrelations") -> EssEstimate:
    """n / (-1 + 2 Σ P̂_s'), P̂_s' = ρ̂_2s' + ρ̂_2s'+1 (누적 최솟값으로 평활)"""
    n = a.n
    rho = np.asarray(a.rho, dtype=float)
    pairs = len(rho) // 2
    if pairs == 0:
        return EssEstimate.clamped(float(n), n, method)

    paired = rho[0 : 2 * pairs : 2] + rho[1 : 2 * pairs : 2]
    paired = np.minimum.accumulate(paired)

    # P̂_0은 항상 포함, s' >= 1부터 양수 구간 검사
    non_positive = np.flatnonzero(paired[1:] <= 0)
    k = non_positive[0] + 1 if len(non_positive) else pairs
    denominator = -1.0 + 2.0 * paired[:k].sum()
    if denominator <= 0:
        return EssEstimate.clamped(float(n), n, method)
    return EssEstimate.clamped(n / denominator, n, method)


def _yule_walker_spectrum0(x: np.ndarray) -> float:
    """AIC로 차수를 고른 Yule-Walker AR 적합의 주파수 0 스펙트럼"""
    n = len(x)
    max_order = min(int(math.floor(10 * math.log10(n))), n - 2)
    acov = _autocovariance(x, max_order)

    # Durbin-Levinson
    phi = np.zeros(0)
    innovation = acov[0]
    best = (n * math.log(innovation), 0, phi, innovation)
    for k in range(1, max_order + 1):
        reflection = (acov[k] - phi @ acov[k - 1 : 0 : -1]) / innovation
        if abs(reflection) >= 1.0:
            break
        phi = np.append(phi - reflection * phi[::-1], reflection)
        innovation *= 1.0 - reflection**2
        if innovation <= 0:
            break
        aic = n * math.log(innovation) + 2 * k
        if aic < best[0]:
            best = (aic, k, phi.copy(), innovation)

    _, order, coefficients, innovation = best
    var_pred = innovation * n / (n - (order + 1))
    return var_pred / (1.0 - coefficients.sum()) ** 2


def ar_spectrum_ess(x, method: str = "arSpectrum") -> EssEstimate:
    """n · Var(x) / Γ̂(0)"""
    x = _as_series(x, 8, "ar_spectrum_ess")
    n = len(x)
    if _is_constant(x):
        return EssEstimate.degenerate_one(n, method)
    spectrum0 = _yule_walker_spectrum0(x)
    if spectrum0 <= 0 or not np.isfinite(spectrum0):
        return EssEstimate.clamped(float(n), n, method)
    return EssEstimate.clamped(n * x.var(ddof=1) / spectrum0, n, method)


def _batch_variance(x: np.ndarray, batch_size: int, mean: np.ndarray) -> float:
    n_batches = len(x) // batch_size
    batches = x[: n_batches * batch_size].reshape(n_batches, batch_size, -1).mean(axis=1)
    deviation = ((batches - mean) ** 2).sum()
    return batch_size / (n_batches - 1) * deviation


def batch_means_limiting_variance_vec(x) -> float:
    """벡터 시계열 (n x d)의 lobed 배치 평균 극한분산

    배치 평균과 전체 평균의 제곱 유클리드 거리를 쓴다.
    λ̂_L² = 2 λ̂_b² - λ̂_{b/3}², b = ⌊√n⌋
    """
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    n = len(x)
    if n < 16:
        raise InsufficientSamplesError(f"배치 평균에는 표본이 16개 이상 필요합니다 (현재 {n}개).")
    b = math.isqrt(n)
    mean = x.mean(axis=0)
    lobed = 2.0 * _batch_variance(x, b, mean) - _batch_variance(x, b // 3, mean)
    return max(lobed, settings.variance_floor)


def batch_means_limiting_variance(x) -> float:
    x = _as_series(x, 16, "batch_means_limiting_variance")
    return batch_means_limiting_variance_vec(x)


def batch_means_ess(x, method: str = "batchMeans") -> EssEstimate:
    """n · σ̂² / λ̂_L²"""
    x = _as_series(x, 16, "batch_means_ess")
    n = len(x)
    if _is_constant(x):
        return EssEstimate.degenerate_one(n, method)
    return EssEstimate.clamped(
        n * x.var(ddof=1) / batch_means_limiting_variance(x), n, method
    )
