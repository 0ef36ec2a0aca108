"""
ESS 검증 프로토콜

1. 목표 분포에서 m개 가짜 MCMC 체인 실행
2. 체인 간 분산으로 분할 확률 / 위상 확률 / MRC의 ŝe_MCMC 계산
3. 체인별 ESS_i 추정 후 반올림한 개수만큼 독립 표본 추출
4. 독립 표본 집합으로 ŝe_MCESS 계산
5. 항목과 방법별 RMCE / ITMCE 비교
"""

import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np
import pandas as pd

from ..config import settings
from ..distance.frechet import distance_matrix
from ..ess.base import TreeEssEstimator
from ..ess.estimators import get_estimator
from ..models.ess import TreeEssMethod
from ..models.summary import ErrorComparison, SplitProbabilities, SummaryKind
from ..models.tree import Chain, Split, Topology
from ..simulation.sampler import Proposal, iid_sample, sample_chain
from ..simulation.target import CategoricalTreeDistribution
from ..summaries.probabilities import split_probabilities
from ..summaries.standard_error import compare_errors, frechet_se_mrc, se_scalar
from ..trees.consensus import mrc_tree
from ..trees.newick import serialize_newick

logger = logging.getLogger(__name__)

MethodLike = Union[TreeEssMethod, TreeEssEstimator]

DEFAULT_NRUNS = (2, 4, 10, 20)


def method_name(method: MethodLike) -> str:
    return method.value if isinstance(method, TreeEssMethod) else method.name


@dataclass
class BenchmarkConfig:
    """검증 프로토콜 설정"""

    target: CategoricalTreeDistribution
    m: int  # 반복 체인 수
    iterations: int
    thin: int
    methods: list[MethodLike]
    seed: int
    nruns: Sequence[int] = DEFAULT_NRUNS
    proposal: Proposal = Proposal.RESTRICTED
    iid_chains: bool = False  # True면 MCMC 대신 같은 크기의 독립 표본을 체인으로 사용

    def __post_init__(self):
        if self.m < 2:
            raise ValueError(f"m은 2 이상이어야 합니다: {self.m}")
        if self.thin < 1:
            raise ValueError(f"thin은 1 이상이어야 합니다: {self.thin}")
        if self.kept < 16:
            raise ValueError(f"체인당 남는 표본이 16개 이상이어야 합니다 (현재 {self.kept}개).")
        if not self.methods:
            raise ValueError("ESS 방법이 하나 이상 필요합니다.")
        names = [method_name(method) for method in self.methods]
        if len(set(names)) != len(names):
            raise ValueError(f"ESS 방법 이름이 중복되었습니다: {names}")

    @property
    def kept(self) -> int:
        return self.iterations // self.thin


@dataclass(frozen=True)
class SummaryItems:
    """오차를 비교할 항목: 분할, 위상, MRC"""

    splits: tuple[Split, ...]
    split_probs: tuple[float, ...]
    trees: tuple[Topology, ...]
    tree_probs: tuple[float, ...]

    def keys(self) -> list[tuple[SummaryKind, object]]:
        return (
            [(SummaryKind.SPLIT, split) for split in self.splits]
            + [(SummaryKind.TREE, tree) for tree in self.trees]
            + [(SummaryKind.MRC, "mrc")]
        )


@dataclass(frozen=True)
class BenchmarkRecord:
    """(방법, 요약 종류, 항목) 하나의 오차 비교"""

    method: str
    summary_kind: SummaryKind
    item_id: str
    item_prob: float
    comparison: ErrorComparison
    mean_ess: float


@dataclass
class BenchmarkReport:
    """검증 프로토콜 결과"""

    records: list[BenchmarkRecord]
    chain_ess: dict[str, list[float]]  # 방법별 체인 ESS
    chain_names: list[str]
    m: int
    iterations: int
    thin: int
    kept: int
    metadata: dict = field(default_factory=dict)

    def mean_ess(self, method: str) -> float:
        values = self.chain_ess.get(method)
        return float(np.mean(values)) if values else math.nan

    def ess_bin(self, method: str, cutoff: Optional[float] = None) -> str:
        """방법별 평균 ESS 구간 (fixedN은 반복 수, nRuns는 체인 수로 묶음)"""
        cutoff = settings.ess_bin_cutoff if cutoff is None else cutoff
        if method == TreeEssMethod.FIXED_N.value:
            return f"iterations={self.iterations}"
        if method.startswith("nRuns"):
            return f"runs={method[len('nRuns'):]}"
        return f"<{cutoff:g}" if self.mean_ess(method) < cutoff else f">={cutoff:g}"

    def records_for(self, method: str, kind: Optional[SummaryKind] = None) -> list[BenchmarkRecord]:
        return [
            r for r in self.records
            if r.method == method and (kind is None or r.summary_kind == kind)
        ]

    def methods(self) -> list[str]:
        seen = dict.fromkeys(r.method for r in self.records)
        return list(seen)

    @property
    def n_degenerate(self) -> int:
        return sum(1 for r in self.records if r.comparison.degenerate)

    def to_frame(self) -> pd.DataFrame:
        """method, summary_kind, item_id, item_prob, se_mcmc, se_mcess, rmce, itmce, mean_ess"""
        rows = [
            {
                "method": r.method,
                "summary_kind": r.summary_kind.value,
                "item_id": r.item_id,
                "item_prob": r.item_prob,
                "se_mcmc": r.comparison.se_mcmc,
                "se_mcess": r.comparison.se_mcess,
                "rmce": r.comparison.rmce,
                "itmce": r.comparison.itmce,
                "mean_ess": r.mean_ess,
                "degenerate": r.comparison.degenerate,
            }
            for r in self.records
        ]
        columns = [
            "method", "summary_kind", "item_id", "item_prob", "se_mcmc",
            "se_mcess", "rmce", "itmce", "mean_ess", "degenerate",
        ]
        return pd.DataFrame(rows, columns=columns)

    def chain_ess_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(self.chain_ess, index=self.chain_names)
        frame.index.name = "chain"
        return frame.reset_index()


def _pooled_split_probabilities(chains: Sequence[Chain]) -> SplitProbabilities:
    counts: Counter = Counter()
    for chain in chains:
        counts.update(split_probabilities(chain).counts)
    total = sum(len(chain) for chain in chains)
    return SplitProbabilities(
        taxa=chains[0].taxa,
        probs={split: c / total for split, c in counts.items()},
        n=total,
        counts=dict(counts),
    )


def select_items(
    chains: Sequence[Chain],
    split_min_prob: Optional[float] = None,
    tree_cap: Optional[int] = None,
) -> SummaryItems:
    """풀링 확률 split_min_prob 이상의 분할과 확률 상위 tree_cap개 위상"""
    split_min_prob = settings.report_split_min_prob if split_min_prob is None else split_min_prob
    tree_cap = settings.tree_report_cap if tree_cap is None else tree_cap

    pooled = _pooled_split_probabilities(chains)
    splits = sorted(s for s, p in pooled.probs.items() if p >= split_min_prob)

    tree_counts: Counter = Counter()
    for chain in chains:
        tree_counts.update(chain.samples)
    total = sum(tree_counts.values())
    # most_common은 동률일 때 첫 등장 순서를 유지
    trees = [t for t, _ in tree_counts.most_common(tree_cap)]

    return SummaryItems(
        splits=tuple(splits),
        split_probs=tuple(pooled.probs[s] for s in splits),
        trees=tuple(trees),
        tree_probs=tuple(tree_counts[t] / total for t in trees),
    )


def standard_errors(chains: Sequence[Chain], items: SummaryItems) -> dict[tuple[SummaryKind, object], float]:
    """m개 체인으로 항목별 ŝe 계산 (MRC는 풀링 MRC 기준 프레셰 표준오차)"""
    if len(chains) < 2:
        raise ValueError(f"표준오차에는 체인이 2개 이상 필요합니다 (현재 {len(chains)}개).")
    taxa = Chain.check_shared_taxa(chains)

    per_chain = [split_probabilities(chain) for chain in chains]
    per_tree = [Counter(chain.samples) for chain in chains]

    errors = {}
    for split in items.splits:
        errors[(SummaryKind.SPLIT, split)] = se_scalar([p.get(split) for p in per_chain])
    for tree in items.trees:
        errors[(SummaryKind.TREE, tree)] = se_scalar(
            [counts[tree] / len(chain) for counts, chain in zip(per_tree, chains)]
        )

    pooled_mrc = mrc_tree(_pooled_split_probabilities(chains), taxa)
    per_run_mrc = [mrc_tree(p, taxa) for p in per_chain]
    errors[(SummaryKind.MRC, "mrc")] = frechet_se_mrc(per_run_mrc, pooled_mrc)
    return errors


def nruns_bruteforce(
    chains: Sequence[Chain], items: Optional[SummaryItems] = None
) -> dict[tuple[SummaryKind, object], float]:
    """체인 부분집합에만 ŝe_MCMC 공식을 적용한 다중 체인 오차 추정"""
    if len(chains) < 2:
        raise ValueError(f"nRuns에는 체인이 2개 이상 필요합니다 (현재 {len(chains)}개).")
    items = items or select_items(chains)
    return standard_errors(chains, items)


def _item_ids(items: SummaryItems, taxa) -> dict[tuple[SummaryKind, object], tuple[str, float]]:
    helper = SplitProbabilities(taxa=taxa, probs={}, n=0)
    ids = {}
    for split, prob in zip(items.splits, items.split_probs):
        ids[(SummaryKind.SPLIT, split)] = (helper.split_id(split), prob)
    for tree, prob in zip(items.trees, items.tree_probs):
        ids[(SummaryKind.TREE, tree)] = (serialize_newick(tree), prob)
    ids[(SummaryKind.MRC, "mrc")] = ("mrc", math.nan)
    return ids


def round_ess(value: float) -> int:
    """가장 가까운 정수로 반올림, 최소 1"""
    return max(1, int(math.floor(value + 0.5)))


def _resolve(method: MethodLike) -> TreeEssEstimator:
    return get_estimator(method) if isinstance(method, TreeEssMethod) else method


class BenchmarkRunner:
    """ESS 검증 프로토콜 실행기"""

    def __init__(self, cfg: BenchmarkConfig):
        self.cfg = cfg
        chain_seq, ess_seq, iid_seq = np.random.SeedSequence(cfg.seed).spawn(3)
        self.chain_seeds = chain_seq.spawn(cfg.m)
        self.ess_seeds = [seq.spawn(cfg.m) for seq in ess_seq.spawn(len(cfg.methods))]
        self.iid_seeds = [seq.spawn(cfg.m) for seq in iid_seq.spawn(len(cfg.methods))]

    def run_chains(self) -> list[Chain]:
        """1단계: m개 체인"""
        cfg = self.cfg
        chains = []
        rates = []
        for i, seed in enumerate(self.chain_seeds):
            name = f"chain{i + 1}"
            if cfg.iid_chains:
                chains.append(iid_sample(cfg.target, cfg.kept, seed=seed, name=name))
            else:
                result = sample_chain(cfg.target, cfg.iterations, cfg.thin, seed, cfg.proposal, name)
                chains.append(result.chain)
                rates.append(result.acceptance_rate)
        if rates:
            logger.info(f"  -> 평균 수락률 {np.mean(rates):.3%}")
        return chains

    def estimate_ess(self, chains: Sequence[Chain]) -> dict[str, list[float]]:
        """3단계 앞부분: 방법별 체인 ESS"""
        estimators = [_resolve(method) for method in self.cfg.methods]
        chain_ess = {estimator.name: [] for estimator in estimators}
        for i, chain in enumerate(chains):
            distances = None
            if any(getattr(e, "needs_distances", True) for e in estimators):
                distances = distance_matrix(chain)
            for j, estimator in enumerate(estimators):
                estimate = estimator.estimate(chain, distances, seed=self.ess_seeds[j][i])
                chain_ess[estimator.name].append(float(estimate))
        return chain_ess

    def iid_sets(self, method_index: int, ess_values: Sequence[float]) -> list[Chain]:
        """3단계 뒷부분: ESS_i개 독립 표본 집합"""
        return [
            iid_sample(
                self.cfg.target,
                round_ess(value),
                seed=self.iid_seeds[method_index][i],
                name=f"iid{i + 1}",
            )
            for i, value in enumerate(ess_values)
        ]

    def run(self) -> BenchmarkReport:
        cfg = self.cfg
        logger.info("=" * 50)
        logger.info(
            f"ESS 검증 시작: m={cfg.m}, 반복 {cfg.iterations}회, thin {cfg.thin}, "
            f"목표 위상 {len(cfg.target)}개"
        )
        logger.info("=" * 50)

        logger.info("\n[1/4] 체인 실행 중...")
        chains = self.run_chains()

        logger.info("\n[2/4] ŝe_MCMC 계산 중...")
        items = select_items(chains)
        se_mcmc = standard_errors(chains, items)
        ids = _item_ids(items, cfg.target.taxa)
        logger.info(f"  -> 분할 {len(items.splits)}개, 위상 {len(items.trees)}개, MRC 1개")

        logger.info("\n[3/4] 체인별 ESS 추정 중...")
        chain_ess = self.estimate_ess(chains)

        logger.info("\n[4/4] 독립 표본으로 ŝe_MCESS 비교 중...")
        records = []
        for j, method in enumerate(cfg.methods):
            name = method_name(method)
            values = chain_ess[name]
            se_mcess = standard_errors(self.iid_sets(j, values), items)
            mean_ess = float(np.mean(values))
            records.extend(self._records(name, se_mcmc, se_mcess, ids, mean_ess))
            logger.info(f"  {name}: 평균 ESS {mean_ess:.1f}")

        for k in cfg.nruns:
            if 2 <= k <= cfg.m:
                se_nruns = nruns_bruteforce(chains[:k], items)
                records.extend(self._records(f"nRuns{k}", se_mcmc, se_nruns, ids, math.nan))

        report = BenchmarkReport(
            records=records,
            chain_ess=chain_ess,
            chain_names=[chain.name for chain in chains],
            m=cfg.m,
            iterations=cfg.iterations,
            thin=cfg.thin,
            kept=cfg.kept,
            metadata={
                "seed": cfg.seed,
                "target_size": len(cfg.target),
                "proposal": cfg.proposal.value,
                "iid_chains": cfg.iid_chains,
                "fixedN_binned_by_iterations": any(
                    method_name(method) == TreeEssMethod.FIXED_N.value for method in cfg.methods
                ),
            },
        )

        logger.info("\n" + "=" * 50)
        logger.info(f"검증 완료: 기록 {len(records)}건, 퇴화 {report.n_degenerate}건")
        logger.info("=" * 50)
        return report

    @staticmethod
    def _records(method, se_mcmc, se_other, ids, mean_ess) -> list[BenchmarkRecord]:
        records = []
        for key, se in se_mcmc.items():
            item_id, prob = ids[key]
            records.append(
                BenchmarkRecord(
                    method=method,
                    summary_kind=key[0],
                    item_id=item_id,
                    item_prob=prob,
                    comparison=compare_errors(se, se_other[key]),
                    mean_ess=mean_ess,
                )
            )
        return records


def run_benchmark(cfg: BenchmarkConfig) -> BenchmarkReport:
    return BenchmarkRunner(cfg).run()
