"""
표본 간 거리 행렬
"""

from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
import pandas as pd

from ..config import settings

# 상삼각 합 계산 시 한 번에 펼치는 행 수
_BLOCK_ROWS = 512


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """대칭 거리 행렬

    같은 위상이 반복되는 체인을 위해 고유 위상 간 거리(unique)와
    표본별 고유 위상 코드(codes)만 저장하고, 전체 n x n 행렬은 필요할 때 만든다.
    """

    unique: np.ndarray  # (고유 위상 수 x 고유 위상 수)
    codes: np.ndarray  # 표본별 고유 위상 인덱스

    @classmethod
    def from_array(cls, values: np.ndarray) -> "DistanceMatrix":
        """임의의 대칭 거리 행렬로 생성 (중복 제거 없음)"""
        values = np.asarray(values)
        if values.ndim != 2 or values.shape[0] != values.shape[1]:
            raise ValueError(f"정방 행렬이 필요합니다: {values.shape}")
        if not np.allclose(values, values.T):
            raise ValueError("거리 행렬이 대칭이 아닙니다.")
        if np.any(np.diag(values) != 0):
            raise ValueError("거리 행렬의 대각 성분은 0이어야 합니다.")
        return cls(unique=values, codes=np.arange(values.shape[0]))

    @property
    def n(self) -> int:
        return len(self.codes)

    def __len__(self) -> int:
        return self.n

    @cached_property
    def values(self) -> np.ndarray:
        """전체 n x n 행렬"""
        return self.unique[np.ix_(self.codes, self.codes)]

    @cached_property
    def squared_unique(self) -> np.ndarray:
        return self.unique.astype(float) ** 2

    def column(self, r: int) -> np.ndarray:
        """기준 표본 r까지의 거리열 d(τ_i, τ_r)"""
        return self.unique[self.codes, self.codes[r]]

    def lag(self, s: int) -> np.ndarray:
        """시차 s의 거리열 d(τ_i, τ_{i+s}), i = 0..n-s-1"""
        if s <= 0:
            return np.zeros(self.n - max(s, 0), dtype=self.unique.dtype)
        return self.unique[self.codes[:-s], self.codes[s:]]

    @cached_property
    def row_sums(self) -> np.ndarray:
        """표본별 거리 합 Σ_j d(τ_i, τ_j)"""
        counts = np.bincount(self.codes, minlength=len(self.unique))
        return (self.unique @ counts)[self.codes]

    def upper_squared_sums(self) -> tuple[np.ndarray, np.ndarray]:
        """제곱 거리 상삼각(i < j)의 열 합과 행 합

        Returns:
            (col, row): col[j] = Σ_{i<j} d²_ij, row[i] = Σ_{j>i} d²_ij
        """
        n = self.n
        squared = self.squared_unique
        col = np.zeros(n)
        row = np.zeros(n)
        j_index = np.arange(n)
        for start in range(0, n, _BLOCK_ROWS):
            stop = min(start + _BLOCK_ROWS, n)
            block = squared[np.ix_(self.codes[start:stop], self.codes)]
            block = np.where(j_index[None, :] > np.arange(start, stop)[:, None], block, 0.0)
            col += block.sum(axis=0)
            row[start:stop] = block.sum(axis=1)
        return col, row

    @property
    def is_constant(self) -> bool:
        """모든 표본 간 거리가 0인지"""
        used = np.unique(self.codes)
        if len(used) == 1:
            return True
        return not np.any(self.unique[np.ix_(used, used)])

    def take(self, indices: Sequence[int]) -> "DistanceMatrix":
        return DistanceMatrix(unique=self.unique, codes=self.codes[np.asarray(indices, dtype=int)])

    def reversed(self) -> "DistanceMatrix":
        return DistanceMatrix(unique=self.unique, codes=self.codes[::-1].copy())

    def scaled(self, factor: float) -> "DistanceMatrix":
        if factor <= 0:
            raise ValueError(f"배율은 양수여야 합니다: {factor}")
        return DistanceMatrix(unique=self.unique * factor, codes=self.codes)

    def to_tsv(self, path: Path, labels: Optional[Sequence[str]] = None):
        """전체 대칭 행렬을 TSV로 저장 (디버깅용)"""
        labels = list(labels) if labels is not None else [str(i) for i in range(self.n)]
        frame = pd.DataFrame(self.values, index=labels, columns=labels)
        frame.to_csv(path, sep="\t", float_format=settings.float_format)
