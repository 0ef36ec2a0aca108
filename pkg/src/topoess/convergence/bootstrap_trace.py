"""
블록 부트스트랩 단일 체인 수렴 추적
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np
import pandas as pd

from ..config import settings
from ..errors import InsufficientSamplesError
from ..ess.tree import split_frequency_ess
from ..models.tree import Chain
from ..summaries.probabilities import asdsf_from_frequencies
from ..trees.encoding import EncodedChain, encode_chain

logger = logging.getLogger(__name__)


class TraceKind(Enum):
    """복제 요약과 기준 요약의 차이 척도"""

    ASDSF = "asdsf"
    TREE_PROB_EUCLIDEAN = "tree_prob_euclidean"
    CONSENSUS_RF = "consensus_rf"

    @property
    def korean_name(self) -> str:
        names = {
            TraceKind.ASDSF: "분할 빈도 ASDSF",
            TraceKind.TREE_PROB_EUCLIDEAN: "위상 확률 유클리드 거리",
            TraceKind.CONSENSUS_RF: "합의수 RF 거리",
        }
        return names[self]


@dataclass(frozen=True)
class TraceRow:
    n_i: int
    prefix_split_frequency_ess: float
    kind: TraceKind
    threshold: Optional[float]
    q05: float
    q50: float
    q95: float


def default_subsample_sizes(n: int, count: Optional[int] = None, minimum: Optional[int] = None) -> list[int]:
    """minimum부터 n까지 로그 간격 부분표본 크기"""
    count = settings.bootstrap_sizes if count is None else count
    minimum = settings.bootstrap_min_size if minimum is None else minimum
    minimum = max(4, min(minimum, n))
    return sorted({int(round(v)) for v in np.geomspace(minimum, n, count)})


class _Summaries:
    """인코딩된 체인에서 인덱스 집합의 요약 계산"""

    def __init__(self, encoded: EncodedChain):
        self.encoded = encoded
        self.split_keys = encoded.splits

    def split_freq(self, codes: np.ndarray) -> np.ndarray:
        return self.encoded.split_frequencies(codes)

    def tree_freq(self, codes: np.ndarray) -> np.ndarray:
        counts = np.bincount(codes, minlength=len(self.encoded.unique))
        return counts / len(codes)

    def consensus(self, freq: np.ndarray, threshold: float) -> frozenset:
        return frozenset(np.flatnonzero(freq > threshold).tolist())

    def discrepancy(self, kind: TraceKind, rep: np.ndarray, ref: np.ndarray, threshold=None) -> float:
        if kind == TraceKind.ASDSF:
            # 두 표본 어디에도 없는 분할은 제외
            freqs = [
                {split: p for split, p in zip(self.split_keys, self.split_freq(codes)) if p > 0}
                for codes in (rep, ref)
            ]
            return asdsf_from_frequencies(freqs, 0.0)[0]
        if kind == TraceKind.TREE_PROB_EUCLIDEAN:
            return float(np.linalg.norm(self.tree_freq(rep) - self.tree_freq(ref)))
        # 합의수끼리의 RF 거리 = 포함 분할 인덱스 집합의 대칭차
        a = self.consensus(self.split_freq(rep), threshold)
        b = self.consensus(self.split_freq(ref), threshold)
        return float(len(a ^ b))


def block_bootstrap_trace(
    chain: Chain,
    subsample_sizes: Optional[Sequence[int]] = None,
    r: Optional[int] = None,
    kind: TraceKind = TraceKind.ASDSF,
    consensus_thresholds: Optional[Sequence[float]] = None,
    seed=None,
) -> list[TraceRow]:
    """부분표본 크기 n_i마다 블록 부트스트랩 복제와 앞부분 기준 요약의 차이 분위수

    블록 길이 b = ⌊√n_i⌋, 블록 수 a = ⌊n_i / b⌋이며 기준 요약은 앞 a·b개 표본으로 계산한다.
    """
    n = len(chain)
    r = settings.bootstrap_replicates if r is None else r
    if r < 10:
        raise ValueError(f"복제 수는 10 이상이어야 합니다: {r}")
    sizes = list(subsample_sizes) if subsample_sizes is not None else default_subsample_sizes(n)
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise ValueError(f"부분표본 크기는 증가해야 합니다: {sizes}")
    if sizes and (sizes[0] < 4 or sizes[-1] > n):
        raise InsufficientSamplesError(f"부분표본 크기는 [4, {n}] 범위여야 합니다: {sizes}")

    if kind == TraceKind.CONSENSUS_RF:
        thresholds = list(consensus_thresholds or settings.consensus_thresholds)
        if any(t < 0.5 for t in thresholds):
            raise ValueError(f"합의수 임계값은 0.5 이상이어야 합니다: {thresholds}")
    else:
        thresholds = [None]

    encoded = encode_chain(chain)
    summaries = _Summaries(encoded)
    size_seeds = np.random.SeedSequence(seed).spawn(len(sizes)) if sizes else []

    rows = []
    for n_i, seq in zip(sizes, size_seeds):
        rng = np.random.default_rng(seq)
        b = math.isqrt(n_i)
        a = n_i // b
        reference = encoded.codes[: a * b]
        ess = split_frequency_ess(chain.prefix(n_i)).value if n_i >= 16 else math.nan

        starts = rng.integers(0, n_i - b + 1, size=(r, a))
        offsets = np.arange(b)
        replicate_codes = encoded.codes[(starts[:, :, None] + offsets).reshape(r, a * b)]

        for threshold in thresholds:
            values = [
                summaries.discrepancy(kind, replicate, reference, threshold)
                for replicate in replicate_codes
            ]
            q05, q50, q95 = np.percentile(values, [5, 50, 95])
            rows.append(
                TraceRow(
                    n_i=n_i,
                    prefix_split_frequency_ess=ess,
                    kind=kind,
                    threshold=threshold,
                    q05=float(q05),
                    q50=float(q50),
                    q95=float(q95),
                )
            )
        logger.debug(f"[{chain.name}] n_i={n_i}: b={b}, a={a}")
    return rows


def trace_frame(rows: Sequence[TraceRow]) -> pd.DataFrame:
    """n_i, prefix_split_frequency_ess, kind, threshold, q05, q50, q95"""
    columns = ["n_i", "prefix_split_frequency_ess", "kind", "threshold", "q05", "q50", "q95"]
    return pd.DataFrame(
        [
            {
                "n_i": row.n_i,
                "prefix_split_frequency_ess": row.prefix_split_frequency_ess,
                "kind": row.kind.value,
                "threshold": row.threshold,
                "q05": row.q05,
                "q50": row.q50,
                "q95": row.q95,
            }
            for row in rows
        ],
        columns=columns,
    )
