"""
위상 ESS 추정 함수

모든 함수는 [1, n] 범위의 EssEstimate를 반환하며,
모든 표본이 같은 위상이면 ESS = 1 (degenerate) 이다.
"""

import logging
from typing import Optional

import numpy as np
from scipy import linalg, stats

from ..config import settings
from ..distance.frechet import medoid_indices
from ..distance.matrix import DistanceMatrix
from ..errors import DegenerateSeriesError, InsufficientSamplesError
from ..models.ess import AutocorrSeries, EssEstimate, TreeEssMethod
from ..models.tree import Chain
from ..trees.encoding import EncodedChain, encode_chain
from .univariate import (
    ar_spectrum_ess,
    autocorrelations,
    batch_means_limiting_variance_vec,
    sum_of_correlations_ess,
)

logger = logging.getLogger(__name__)


def _require(n: int, minimum: int, method: TreeEssMethod):
    if n < minimum:
        raise InsufficientSamplesError(
            f"{method.value}: 표본이 {minimum}개 이상 필요합니다 (현재 {n}개)."
        )


def frechet_correlation_ess(d: DistanceMatrix) -> EssEstimate:
    """거리만으로 추정한 시차별 프레셰 자기상관을 sum-of-correlations ESS에 넣는다

    ρ̂_s = ½(Var_앞 + Var_뒤 - E[Δ²]) / √(Var_앞 · Var_뒤)
    """
    method = TreeEssMethod.FRECHET_CORRELATION.value
    n = d.n
    _require(n, 4, TreeEssMethod.FRECHET_CORRELATION)
    if d.is_constant:
        return EssEstimate.degenerate_one(n, method)

    col, row = d.upper_squared_sums()
    leading = np.cumsum(col)  # leading[k-1]: 앞쪽 k개 표본의 쌍 합
    trailing = np.cumsum(row[::-1])[::-1]  # trailing[s]: 표본 s.. 의 쌍 합
    squared = d.squared_unique

    rho = np.ones(n - 1)
    for s in range(1, n - 1):
        m = n - s
        var_lead = leading[m - 1] / (m * (m - 1))
        var_trail = trailing[s] / (m * (m - 1))
        jump = squared[d.codes[:-s], d.codes[s:]].mean()
        scale = np.sqrt(var_lead * var_trail)
        rho[s] = 0.0 if scale == 0 else 0.5 * (var_lead + var_trail - jump) / scale

    rho = np.clip(rho, -1.0, 1.0)
    return sum_of_correlations_ess(AutocorrSeries(rho=rho, n=n), method=method)


def split_frequency_ess(chain: Chain, encoded: Optional[EncodedChain] = None) -> EssEstimate:
    """분할 지시 벡터의 n · σ̂² / λ̂_L² (다변량 배치 평균)"""
    method = TreeEssMethod.SPLIT_FREQUENCY.value
    n = len(chain)
    _require(n, 16, TreeEssMethod.SPLIT_FREQUENCY)
    encoded = encoded or encode_chain(chain)
    if len(np.unique(encoded.codes)) == 1:
        return EssEstimate.degenerate_one(n, method)

    x = encoded.indicator_matrix()
    variance = ((x - x.mean(axis=0)) ** 2).sum() / (n - 1)
    return EssEstimate.clamped(n * variance / batch_means_limiting_variance_vec(x), n, method)


def pseudo_ess(d: DistanceMatrix, aggregate: str = "median") -> EssEstimate:
    """모든 표본을 기준 트리로 삼은 거리열 AR ESS의 중앙값 또는 최솟값"""
    if aggregate == "median":
        method = TreeEssMethod.MEDIAN_PSEUDO
    elif aggregate == "min":
        method = TreeEssMethod.MIN_PSEUDO
    else:
        raise ValueError(f"aggregate는 'median' 또는 'min'이어야 합니다: {aggregate}")

    n = d.n
    _require(n, 8, method)
    if d.is_constant:
        return EssEstimate.degenerate_one(n, method.value)

    # 기준 트리 r의 거리열은 r의 위상에만 의존
    references, inverse = np.unique(d.codes, return_inverse=True)
    per_code = np.empty(len(references))
    for i, code in enumerate(references):
        series = d.unique[d.codes, code].astype(float)
        per_code[i] = ar_spectrum_ess(series).value

    values = per_code[inverse]
    value = np.median(values) if aggregate == "median" else values.min()
    return EssEstimate.clamped(float(value), n, method.value)


def _folded_rank_scores(zeta: np.ndarray) -> np.ndarray:
    n = len(zeta)
    ranks = stats.rankdata(zeta, method="average")
    return stats.norm.ppf((ranks - 0.375) / (n - 0.25))


def folded_rank_medoid_ess(d: DistanceMatrix) -> EssEstimate:
    """메도이드까지 거리의 순위 정규화 점수에 대한 sum-of-correlations ESS (메도이드별 최솟값)"""
    method = TreeEssMethod.FOLDED_RANK_MEDOID.value
    n = d.n
    _require(n, 8, TreeEssMethod.FOLDED_RANK_MEDOID)
    if d.is_constant:
        return EssEstimate.degenerate_one(n, method)

    values = []
    for code in np.unique(d.codes[medoid_indices(d)]):
        z = _folded_rank_scores(d.unique[d.codes, code])
        try:
            values.append(sum_of_correlations_ess(autocorrelations(z), method=method).value)
        except DegenerateSeriesError:
            values.append(1.0)
    return EssEstimate.clamped(min(values), n, method)


def total_distance_ess(d: DistanceMatrix) -> EssEstimate:
    """표본별 거리 합 Σ_j d(τ_i, τ_j)의 AR ESS"""
    method = TreeEssMethod.TOTAL_DISTANCE.value
    _require(d.n, 8, TreeEssMethod.TOTAL_DISTANCE)
    return ar_spectrum_ess(d.row_sums.astype(float), method=method)


def cmds_coordinates(d: DistanceMatrix) -> Optional[np.ndarray]:
    """고전적 다차원척도의 첫 좌표 (최대 고유값이 0에 가까우면 None)"""
    squared = d.values.astype(float) ** 2
    row_mean = squared.mean(axis=1)
    grand = row_mean.mean()
    centered = -0.5 * (squared - row_mean[:, None] - row_mean[None, :] + grand)

    n = d.n
    eigenvalues, eigenvectors = linalg.eigh(centered, subset_by_index=[n - 1, n - 1])
    top = eigenvalues[0]
    if top <= settings.cmds_tol * max(1.0, np.abs(centered).max()):
        return None

    coordinates = eigenvectors[:, 0] * np.sqrt(top)
    if coordinates[np.argmax(np.abs(coordinates))] < 0:
        coordinates = -coordinates
    return coordinates


def cmds_ess(d: DistanceMatrix) -> EssEstimate:
    """CMDS 첫 좌표열의 AR ESS"""
    method = TreeEssMethod.CMDS.value
    n = d.n
    _require(n, 8, TreeEssMethod.CMDS)
    if d.is_constant:
        return EssEstimate.degenerate_one(n, method)
    coordinates = cmds_coordinates(d)
    if coordinates is None:
        return EssEstimate.degenerate_one(n, method)
    return ar_spectrum_ess(coordinates, method=method)


def jump_profile(d: DistanceMatrix) -> np.ndarray:
    """G(s): 시차별 거리 중앙값의 누적 최댓값 (G(0) = 0), s = 0..n-1"""
    g = np.array([np.median(d.lag(s)) for s in range(1, d.n)], dtype=float)
    return np.concatenate([[0.0], np.maximum.accumulate(g)])


def jump_threshold(
    d: DistanceMatrix, alpha: float, n_boot: int, rng: np.random.Generator
) -> float:
    """순서를 복원추출로 섞은 체인에서 G(1)의 (1 - alpha) 분위수"""
    n = d.n
    order = rng.integers(0, n, size=(n_boot, n))
    codes = d.codes[order]
    lag_one = d.unique[codes[:, :-1], codes[:, 1:]]
    return float(np.quantile(np.median(lag_one, axis=1), 1.0 - alpha))


def _first_crossing(profile: np.ndarray, threshold: float) -> Optional[int]:
    above = np.flatnonzero(profile[1:] > threshold)
    return int(above[0]) + 1 if len(above) else None


def _smoothed_crossing(profile: np.ndarray, threshold: float) -> Optional[float]:
    """G가 바뀌는 시차들 사이를 선형 보간한 G*가 처음 threshold 이상이 되는 시차"""
    steps = np.concatenate([[0], np.flatnonzero(np.diff(profile) > 0) + 1])
    levels = profile[steps]
    reached = np.flatnonzero(levels >= threshold)
    if not len(reached):
        return None
    i = reached[0]
    if i == 0:
        return 0.0
    s_a, s_b = steps[i - 1], steps[i]
    g_a, g_b = levels[i - 1], levels[i]
    return float(s_a + (threshold - g_a) / (g_b - g_a) * (s_b - s_a))


def jump_distance_ess(
    d: DistanceMatrix,
    smoothed: bool = True,
    alpha: Optional[float] = None,
    n_boot: Optional[int] = None,
    seed=None,
) -> EssEstimate:
    """n / s₀, s₀는 G(s)가 부트스트랩 임계값 ε̂을 처음 넘는 시차

    Args:
        smoothed: True면 G를 선형 보간하여 분수 시차 s₀ 허용
        seed: 정수 시드, SeedSequence 또는 Generator
    """
    method = (
        TreeEssMethod.JUMP_DISTANCE_BOOTSTRAP
        if smoothed
        else TreeEssMethod.JUMP_DISTANCE_BOOTSTRAP_UNSMOOTHED
    )
    alpha = settings.jump_alpha if alpha is None else alpha
    n_boot = settings.jump_n_boot if n_boot is None else n_boot
    if not 0 < alpha < 1:
        raise ValueError(f"alpha는 (0, 1) 범위여야 합니다: {alpha}")
    if n_boot < 1:
        raise ValueError(f"n_boot는 1 이상이어야 합니다: {n_boot}")

    n = d.n
    _require(n, 8, method)
    if d.is_constant:
        return EssEstimate.degenerate_one(n, method.value)

    rng = np.random.default_rng(seed)
    profile = jump_profile(d)
    threshold = jump_threshold(d, alpha, n_boot, rng)

    if smoothed and threshold > 0:
        s0 = _smoothed_crossing(profile, threshold)
    else:
        # ε̂ = 0: 비평활 규칙
        s0 = _first_crossing(profile, threshold)

    if s0 is None:
        logger.debug(f"{method.value}: 임계값 {threshold}을 넘는 시차가 없습니다.")
        return EssEstimate.clamped(1.0, n, method.value)
    if s0 <= 0:
        return EssEstimate.clamped(float(n), n, method.value)
    return EssEstimate.clamped(n / s0, n, method.value)


def fixed_n_ess(chain: Chain) -> EssEstimate:
    n = len(chain)
    return EssEstimate.clamped(float(n), n, TreeEssMethod.FIXED_N.value)


def log_posterior_ess(chain: Chain) -> EssEstimate:
    """로그 사후밀도 추적값의 AR ESS"""
    if chain.log_density is None:
        raise ValueError(f"[{chain.name}] 로그 밀도 추적값이 없습니다.")
    return ar_spectrum_ess(chain.log_density, method=TreeEssMethod.LOG_POSTERIOR.value)
