"""
Normal(0, 1) 평균 추정 보정 실험

스칼라 Metropolis 체인에서 같은 검증 프로토콜을 돌려 AR ESS의 RMCE / ITMCE 분포를 본다.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import pandas as pd

from ..ess.univariate import ar_spectrum_ess
from ..models.summary import ErrorComparison
from ..summaries.standard_error import compare_errors, se_scalar
from .runner import round_ess

logger = logging.getLogger(__name__)

# 난수를 한 번에 생성하는 반복 수
_CHUNK = 8192


@dataclass(frozen=True)
class CalibrationRow:
    length: int
    thin: int
    mean_ess: float
    comparison: ErrorComparison


@dataclass
class CalibrationReport:
    rows: list[CalibrationRow]
    m: int
    kept: int

    @property
    def rmce(self) -> np.ndarray:
        return np.array([row.comparison.rmce for row in self.rows])

    @property
    def itmce(self) -> np.ndarray:
        return np.array([row.comparison.itmce for row in self.rows])

    @property
    def rmce_median(self) -> float:
        return float(np.nanmedian(self.rmce))

    def rmce_range(self, coverage: float) -> tuple[float, float]:
        """가운데 coverage 비율을 덮는 RMCE 분위수 구간"""
        tail = (1.0 - coverage) / 2
        low, high = np.nanquantile(self.rmce, [tail, 1.0 - tail])
        return float(low), float(high)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [
                {
                    "length": row.length,
                    "thin": row.thin,
                    "mean_ess": row.mean_ess,
                    "se_mcmc": row.comparison.se_mcmc,
                    "se_mcess": row.comparison.se_mcess,
                    "rmce": row.comparison.rmce,
                    "itmce": row.comparison.itmce,
                }
                for row in self.rows
            ],
            columns=["length", "thin", "mean_ess", "se_mcmc", "se_mcess", "rmce", "itmce"],
        )


def random_walk_metropolis(
    m: int, iterations: int, thin: int, proposal_sd: float, rng: np.random.Generator
) -> np.ndarray:
    """Normal(0, 1) 목표의 랜덤워크 Metropolis m개 체인 (m x ⌊iterations/thin⌋)

    시작값은 목표 분포에서 뽑는다.
    """
    x = rng.standard_normal(m)
    kept = np.empty((m, iterations // thin))
    for start in range(0, iterations, _CHUNK):
        size = min(_CHUNK, iterations - start)
        steps = rng.standard_normal((size, m)) * proposal_sd
        log_u = np.log(rng.random((size, m)))
        for offset in range(size):
            y = x + steps[offset]
            accept = log_u[offset] < 0.5 * (x * x - y * y)
            x = np.where(accept, y, x)
            t = start + offset + 1
            if t % thin == 0:
                kept[:, t // thin - 1] = x
    return kept


def default_lengths(count: int = 50, low: float = 1e3, high: float = 1e5) -> list[int]:
    return sorted({int(round(v)) for v in np.geomspace(low, high, count)})


def run_normal_calibration(
    seed: int,
    lengths: Optional[Sequence[int]] = None,
    m: int = 100,
    kept: int = 1000,
    proposal_sd: float = 0.3,
) -> CalibrationReport:
    """체인 길이별 RMCE / ITMCE

    각 길이에서 m개 체인의 평균으로 ŝe_MCMC를, 체인별 AR ESS만큼의
    독립 Normal(0, 1) 표본 평균으로 ŝe_MCESS를 구한다.
    """
    if m < 2:
        raise ValueError(f"m은 2 이상이어야 합니다: {m}")
    lengths = list(lengths) if lengths is not None else default_lengths()
    if any(length < kept for length in lengths):
        raise ValueError(f"체인 길이는 남길 표본 수 {kept} 이상이어야 합니다.")

    length_seeds = np.random.SeedSequence(seed).spawn(len(lengths))
    rows = []
    for length, seq in zip(lengths, length_seeds):
        chain_seq, iid_seq = seq.spawn(2)
        thin = length // kept
        samples = random_walk_metropolis(m, length, thin, proposal_sd, np.random.default_rng(chain_seq))
        samples = samples[:, :kept]

        ess = [ar_spectrum_ess(chain).value for chain in samples]
        iid_rng = np.random.default_rng(iid_seq)
        iid_means = [iid_rng.standard_normal(round_ess(value)).mean() for value in ess]

        comparison = compare_errors(se_scalar(samples.mean(axis=1)), se_scalar(iid_means))
        rows.append(CalibrationRow(length=length, thin=thin, mean_ess=float(np.mean(ess)), comparison=comparison))
        logger.debug(f"길이 {length}: 평균 ESS {np.mean(ess):.1f}, RMCE {comparison.rmce:.3f}")

    report = CalibrationReport(rows=rows, m=m, kept=kept)
    logger.info(f"보정 완료: 길이 {len(rows)}개, RMCE 중앙값 {report.rmce_median:.3f}")
    return report
