"""
체인 간 분할 확률 비교
"""

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

import pandas as pd

from ..config import settings
from ..ess.estimators import compute_ess
from ..models.ess import TreeEssMethod
from ..models.tree import Chain
from ..summaries.probabilities import asdsf_from_frequencies, split_probabilities
from .proportion import agresti_caffo_diff_ci, jeffreys_ci

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SplitComparisonRow:
    chain_i: str
    chain_j: str
    split_id: str
    p_i: float
    p_j: float
    lo_i: float
    hi_i: float
    lo_j: float
    hi_j: float
    diff_lo: float
    diff_hi: float

    @property
    def passed(self) -> bool:
        """차이 구간이 0을 포함하면 통과"""
        return self.diff_lo <= 0.0 <= self.diff_hi

    @property
    def flag(self) -> str:
        return "pass" if self.passed else "fail"


@dataclass(frozen=True)
class PairSummary:
    chain_i: str
    chain_j: str
    asdsf: float
    msdsf: float
    n_fail: int
    n_splits: int


@dataclass
class SplitComparisonReport:
    method: str
    level: float
    ess: dict[str, float]
    rows: list[SplitComparisonRow] = field(default_factory=list)
    pairs: list[PairSummary] = field(default_factory=list)

    def failed(self, chain_i: str, chain_j: str) -> set[str]:
        """해당 쌍에서 뚜렷하게 다른 분할 식별자"""
        return {
            row.split_id
            for row in self.rows
            if row.chain_i == chain_i and row.chain_j == chain_j and not row.passed
        }

    def to_frame(self) -> pd.DataFrame:
        columns = [
            "chain_i", "chain_j", "split_id", "p_i", "p_j", "lo_i", "hi_i",
            "lo_j", "hi_j", "diff_lo", "diff_hi", "flag",
        ]
        rows = [
            {**{c: getattr(row, c) for c in columns[:-1]}, "flag": row.flag}
            for row in self.rows
        ]
        return pd.DataFrame(rows, columns=columns)

    def pairs_frame(self) -> pd.DataFrame:
        columns = ["chain_i", "chain_j", "asdsf", "msdsf", "n_fail", "n_splits"]
        return pd.DataFrame([vars(pair) for pair in self.pairs], columns=columns)


def _unique_names(chains: Sequence[Chain]) -> list[str]:
    names = [chain.name for chain in chains]
    if len(set(names)) == len(names):
        return names
    return [f"{i + 1}:{name}" for i, name in enumerate(names)]


def compare_chains(
    chains: Sequence[Chain],
    method: TreeEssMethod = TreeEssMethod.FRECHET_CORRELATION,
    level: Optional[float] = None,
    seed=None,
    ess: Optional[Sequence[float]] = None,
) -> SplitComparisonReport:
    """모든 순서쌍 (i, j)에 대해 분할별 Jeffreys 구간과 Agresti-Caffo 차이 구간

    Args:
        ess: 체인별 ESS를 직접 줄 때 사용 (없으면 method로 추정)
    """
    if len(chains) < 2:
        raise ValueError(f"비교에는 체인이 2개 이상 필요합니다 (현재 {len(chains)}개).")
    taxa = Chain.check_shared_taxa(chains)
    level = settings.ci_level if level is None else level
    names = _unique_names(chains)

    if ess is None:
        ess = [compute_ess(chain, [method], seed=seed)[method].value for chain in chains]
    elif len(ess) != len(chains):
        raise ValueError("ESS 개수가 체인 수와 다릅니다.")
    probs = [split_probabilities(chain) for chain in chains]

    report = SplitComparisonReport(
        method=method.value, level=level, ess=dict(zip(names, map(float, ess)))
    )
    for i in range(len(chains)):
        for j in range(len(chains)):
            if i == j:
                continue
            splits = sorted(set(probs[i].probs) | set(probs[j].probs))
            n_fail = 0
            for split in splits:
                p_i, p_j = probs[i].get(split), probs[j].get(split)
                lo_i, hi_i = jeffreys_ci(p_i, ess[i], level)
                lo_j, hi_j = jeffreys_ci(p_j, ess[j], level)
                diff_lo, diff_hi = agresti_caffo_diff_ci(p_i, ess[i], p_j, ess[j], level)
                row = SplitComparisonRow(
                    chain_i=names[i],
                    chain_j=names[j],
                    split_id=probs[i].split_id(split),
                    p_i=p_i,
                    p_j=p_j,
                    lo_i=lo_i,
                    hi_i=hi_i,
                    lo_j=lo_j,
                    hi_j=hi_j,
                    diff_lo=diff_lo,
                    diff_hi=diff_hi,
                )
                n_fail += not row.passed
                report.rows.append(row)

            asdsf, msdsf = asdsf_from_frequencies(
                [probs[i].probs, probs[j].probs], settings.asdsf_min_freq
            )
            report.pairs.append(
                PairSummary(names[i], names[j], asdsf, msdsf, n_fail, len(splits))
            )

    logger.info(
        f"체인 {len(chains)}개 비교 완료 (분류군 {taxa.n_taxa}개, "
        f"뚜렷하게 다른 분할 {sum(p.n_fail for p in report.pairs)}건)"
    )
    return report
