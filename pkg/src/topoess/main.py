"""
위상 ESS 진단 도구 - 메인 실행 파일
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .benchmark.normal import default_lengths, run_normal_calibration
from .benchmark.runner import DEFAULT_NRUNS, BenchmarkConfig, run_benchmark
from .config import settings
from .convergence.bootstrap_trace import TraceKind, block_bootstrap_trace
from .distance.frechet import distance_matrix
from .ess.estimators import compute_ess
from .errors import TopoEssError
from .intervals.comparison import compare_chains
from .models.ess import TreeEssMethod
from .models.tree import Chain
from .publisher.report import ReportWriter
from .simulation.sampler import Proposal, sample_chain
from .simulation.target import (
    CategoricalTreeDistribution,
    build_target,
    load_target,
    toy_target,
    two_mode_target,
)
from .summaries.probabilities import asdsf_msdsf, split_probabilities, tree_probabilities
from .trees.consensus import mrc_tree
from .trees.io import load_chain, load_chains, write_chain

# 로깅 설정
logging.basicConfig(
    level=getattr(logging, settings.log_level.upper()),
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    datefmt="%Y-%m-%d %H:%M:%S",
)
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_DEGENERATE = 3
EXIT_INTERRUPTED = 130

TOY_TARGETS = {
    "toy": toy_target,
    "two-mode": two_mode_target,
}


class UsageError(Exception):
    """잘못된 명령행 사용"""


class TopoEssApp:
    """위상 ESS 진단 도구 메인 클래스"""

    def __init__(self, writer: Optional[ReportWriter] = None):
        self.writer = writer or ReportWriter()

    # ------------------------------------------------------------------ ess
    def run_ess(
        self,
        tree_files: Sequence[Path],
        out: Path,
        methods: Sequence[TreeEssMethod],
        log_files: Optional[Sequence[Path]] = None,
        burnin: int = 0,
        thin: int = 1,
        seed: Optional[int] = None,
        dump_distances: Optional[Path] = None,
    ) -> dict:
        """체인별 ESS 표 작성"""
        logger.info("=" * 50)
        logger.info("위상 ESS 계산 시작")
        logger.info("=" * 50)

        stats = {"chains": 0, "methods": len(methods), "degenerate": 0}

        logger.info("\n[1/2] 체인 로드 중...")
        chains = load_chains(tree_files, log_files, burnin, thin)
        stats["chains"] = len(chains)

        logger.info("\n[2/2] ESS 계산 중...")
        seeds = np.random.SeedSequence(seed).spawn(len(chains)) if seed is not None else [None] * len(chains)
        results = {}
        for i, (chain, chain_seed) in enumerate(zip(chains, seeds)):
            distances = None
            if any(method.needs_distances for method in methods):
                distances = distance_matrix(chain)
                if dump_distances is not None:
                    self.writer.write_distances(distances, Path(dump_distances) / f"{i + 1}_{chain.name}.dist.tsv")
            estimates = compute_ess(chain, methods, seed=chain_seed, distances=distances)
            results[self._chain_label(chains, i)] = {m.value: e for m, e in estimates.items()}
            for method, estimate in estimates.items():
                logger.info(f"  {chain.name} / {method.value}: {estimate.value:.2f}")
                stats["degenerate"] += estimate.degenerate

        self.writer.write_ess_table(results, out)
        self._print_summary("ESS 계산 완료!", stats)
        return stats

    # -------------------------------------------------------------- compare
    def run_compare(
        self,
        tree_files: Sequence[Path],
        out: Path,
        method: TreeEssMethod,
        level: Optional[float] = None,
        burnin: int = 0,
        thin: int = 1,
        seed: Optional[int] = None,
    ) -> dict:
        """체인 간 분할 확률 비교"""
        logger.info("=" * 50)
        logger.info("체인 비교 시작")
        logger.info("=" * 50)

        chains = load_chains(tree_files, None, burnin, thin)
        report = compare_chains(chains, method, level, seed=seed)
        self.writer.write_comparison(report, out)

        asdsf, msdsf = asdsf_msdsf(chains)
        logger.info(f"\n전체 ASDSF {asdsf:.6f}, MSDSF {msdsf:.6f}")
        for pair in report.pairs:
            logger.info(
                f"  {pair.chain_i} vs {pair.chain_j}: ASDSF {pair.asdsf:.6f}, "
                f"MSDSF {pair.msdsf:.6f}, 다른 분할 {pair.n_fail}/{pair.n_splits}"
            )

        stats = {
            "chains": len(chains),
            "pairs": len(report.pairs),
            "failed": sum(pair.n_fail for pair in report.pairs),
            "degenerate": sum(1 for value in report.ess.values() if value <= 1.0),
        }
        self._print_summary("비교 완료!", stats)
        return stats

    # ------------------------------------------------------------- simulate
    def run_simulate(
        self,
        target: CategoricalTreeDistribution,
        iterations: int,
        thin: int,
        chains: int,
        seed: int,
        out_dir: Path,
        proposal: Proposal = Proposal.RESTRICTED,
    ) -> dict:
        """가짜 MCMC 체인 파일 작성"""
        logger.info("=" * 50)
        logger.info(f"가짜 MCMC 시작: 체인 {chains}개, 반복 {iterations}회, 목표 위상 {len(target)}개")
        logger.info("=" * 50)

        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        stats = {"chains": 0, "samples": 0, "degenerate": 0}
        for i, chain_seed in enumerate(np.random.SeedSequence(seed).spawn(chains)):
            name = f"chain{i + 1}"
            result = sample_chain(target, iterations, thin, chain_seed, proposal, name)
            write_chain(result.chain, out_dir / f"{name}.trees", out_dir / f"{name}.log.tsv")
            logger.info(f"  {result}")
            stats["chains"] += 1
            stats["samples"] += len(result.chain)

        self._print_summary("시뮬레이션 완료!", stats)
        return stats

    # ------------------------------------------------------------ benchmark
    def run_benchmark(
        self,
        target: CategoricalTreeDistribution,
        m: int,
        iterations: int,
        thin: int,
        methods: Sequence[TreeEssMethod],
        seed: int,
        out: Path,
        nruns: Sequence[int] = DEFAULT_NRUNS,
        proposal: Proposal = Proposal.RESTRICTED,
        cutoff: Optional[float] = None,
    ) -> dict:
        cfg = BenchmarkConfig(
            target=target,
            m=m,
            iterations=iterations,
            thin=thin,
            methods=list(methods),
            seed=seed,
            nruns=nruns,
            proposal=proposal,
        )
        report = run_benchmark(cfg)
        self.writer.write_benchmark(report, out, cutoff)
        return {"records": len(report.records), "degenerate": report.n_degenerate}

    def run_calibration(self, seed: int, out: Path, m: int, lengths: int) -> dict:
        logger.info("=" * 50)
        logger.info("Normal(0, 1) 보정 실험 시작")
        logger.info("=" * 50)

        report = run_normal_calibration(seed, default_lengths(lengths), m=m)
        self.writer.write_calibration(report, out)
        low80, high80 = report.rmce_range(0.8)
        logger.info(f"  RMCE 중앙값 {report.rmce_median:.4f}, 80% 구간 [{low80:.4f}, {high80:.4f}]")
        return {
            "lengths": len(report.rows),
            "degenerate": sum(row.comparison.degenerate for row in report.rows),
        }

    # ------------------------------------------------------------ bootstrap
    def run_bootstrap(
        self,
        tree_file: Path,
        kind: TraceKind,
        seed: int,
        out: Path,
        replicates: Optional[int] = None,
        sizes: Optional[Sequence[int]] = None,
        thresholds: Optional[Sequence[float]] = None,
        burnin: int = 0,
        thin: int = 1,
    ) -> dict:
        chain = load_chain(tree_file, burnin=burnin, thin=thin)
        rows = block_bootstrap_trace(chain, sizes, replicates, kind, thresholds, seed)
        self.writer.write_trace(rows, out)
        return {"rows": len(rows), "degenerate": int(chain.is_constant)}

    # ------------------------------------------------------------ summarize
    def run_summarize(
        self,
        tree_files: Sequence[Path],
        out_dir: Path,
        threshold: float = 0.5,
        burnin: int = 0,
        thin: int = 1,
    ) -> dict:
        """분할 / 위상 확률 표와 MRC 트리 (여러 파일은 이어 붙여 요약)"""
        chains = load_chains(tree_files, None, burnin, thin)
        pooled = Chain(
            taxa=chains[0].taxa,
            samples=[t for chain in chains for t in chain.samples],
            name="pooled",
        )
        out_dir = Path(out_dir)
        splits = split_probabilities(pooled)
        trees = tree_probabilities(pooled)
        self.writer.write_split_summary(splits, out_dir / "splits.tsv")
        self.writer.write_tree_summary(trees, out_dir / "trees.tsv")
        self.writer.write_newick(mrc_tree(splits, pooled.taxa, threshold), out_dir / "mrc.nwk")
        return {"samples": len(pooled), "splits": len(splits.probs), "trees": len(trees.probs), "degenerate": 0}

    @staticmethod
    def _chain_label(chains: Sequence[Chain], i: int) -> str:
        names = [chain.name for chain in chains]
        return names[i] if names.count(names[i]) == 1 else f"{i + 1}:{names[i]}"

    def _print_summary(self, title: str, stats: dict):
        """결과 요약 출력"""
        logger.info("\n" + "=" * 50)
        logger.info(title)
        for key, value in stats.items():
            logger.info(f"  - {key}: {value}")
        logger.info("=" * 50)


class _ArgumentParser(argparse.ArgumentParser):
    """사용법 오류를 종료 코드 1로 보고하는 파서"""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: 오류: {message}\n")


def _parse_methods(text: str) -> list[TreeEssMethod]:
    try:
        return [TreeEssMethod.parse(item.strip()) for item in text.split(",") if item.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def _parse_floats(text: str) -> list[float]:
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def _parse_ints(text: str) -> list[int]:
    try:
        return [int(item) for item in text.split(",") if item.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def _add_common(parser: argparse.ArgumentParser, load: bool = True):
    if load:
        parser.add_argument("--burnin", type=int, default=0, help="앞쪽에서 버릴 표본 수")
        parser.add_argument("--thin", type=int, default=1, help="솎아내기 간격")
    parser.add_argument("--strict", action="store_true", help="퇴화 통계가 있으면 종료 코드 3")
    parser.add_argument("--verbose", "-v", action="store_true", help="상세 로그 출력")


def _add_target(parser: argparse.ArgumentParser):
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--target", type=Path, help="newick, probability 컬럼 TSV 목표 분포")
    group.add_argument("--target-trees", type=Path, help="트리 표본 파일로부터 목표 분포 생성")
    group.add_argument("--toy", choices=sorted(TOY_TARGETS), help="내장 목표 분포")
    parser.add_argument("--hpd-mass", type=float, default=None, help="--target-trees의 HPD 질량")
    parser.add_argument("--max-support", type=int, default=None, help="--target-trees의 최대 위상 수")
    parser.add_argument(
        "--proposal",
        choices=[p.value for p in Proposal],
        default=Proposal.RESTRICTED.value,
        help="NNI 제안 방식",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="topoess",
        description="계통수 MCMC 표본의 위상 유효표본크기(ESS)와 몬테카를로 오차 진단",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
예시:
  topoess ess run1.trees run2.trees --out ess.tsv
  topoess ess run1.trees --logs run1.log.tsv --methods logPosterior,fixedN --out ess.tsv
  topoess compare run*.trees --method frechetCorrelation --out compare.tsv
  topoess simulate --toy toy --iterations 100000 --thin 100 --chains 4 --seed 1 --out-dir sim/
  topoess benchmark --toy toy --m 50 --iterations 100000 --thin 100 --seed 1 --out bench.tsv
  topoess benchmark --normal-calibration --seed 1 --out calibration.tsv
  topoess bootstrap run1.trees --kind asdsf --seed 1 --out trace.tsv
  topoess summarize run1.trees run2.trees --out-dir summary/
        """,
    )
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    default_methods = ",".join(
        m.value for m in TreeEssMethod if m != TreeEssMethod.LOG_POSTERIOR
    )

    ess = commands.add_parser("ess", help="체인별 ESS 표")
    ess.add_argument("trees", nargs="+", type=Path, help="Newick 줄 단위 트리 파일")
    ess.add_argument("--logs", nargs="+", type=Path, help="트리 파일과 같은 순서의 로그 TSV")
    ess.add_argument("--methods", type=_parse_methods, default=None, help=f"쉼표 구분 (기본: {default_methods})")
    ess.add_argument("--seed", type=int, help="무작위 방법(jumpDistance*)에 필요")
    ess.add_argument("--dump-distances", type=Path, help="체인별 RF 거리 행렬 TSV 저장 디렉토리")
    ess.add_argument("--out", type=Path, required=True)
    _add_common(ess)

    compare = commands.add_parser("compare", help="체인 간 분할 확률 신뢰구간 비교")
    compare.add_argument("trees", nargs="+", type=Path)
    compare.add_argument("--method", type=TreeEssMethod.parse, default=TreeEssMethod.FRECHET_CORRELATION)
    compare.add_argument("--level", type=float, default=None, help=f"신뢰수준 (기본 {settings.ci_level})")
    compare.add_argument("--seed", type=int)
    compare.add_argument("--out", type=Path, required=True)
    _add_common(compare)

    simulate = commands.add_parser("simulate", help="가짜 MCMC 체인 생성")
    _add_target(simulate)
    simulate.add_argument("--iterations", type=int, required=True)
    simulate.add_argument("--thin", type=int, default=1)
    simulate.add_argument("--chains", type=int, default=1)
    simulate.add_argument("--seed", type=int, required=True)
    simulate.add_argument("--out-dir", type=Path, required=True)
    _add_common(simulate, load=False)

    benchmark = commands.add_parser("benchmark", help="ESS 검증 프로토콜")
    target_group = benchmark.add_argument_group("목표 분포")
    target_group.add_argument("--target", type=Path)
    target_group.add_argument("--target-trees", type=Path)
    target_group.add_argument("--toy", choices=sorted(TOY_TARGETS))
    target_group.add_argument("--hpd-mass", type=float, default=None)
    target_group.add_argument("--max-support", type=int, default=None)
    target_group.add_argument("--proposal", choices=[p.value for p in Proposal], default=Proposal.RESTRICTED.value)
    benchmark.add_argument("--m", type=int, default=100)
    benchmark.add_argument("--iterations", type=int)
    benchmark.add_argument("--thin", type=int, default=1)
    benchmark.add_argument("--methods", type=_parse_methods, default=None)
    benchmark.add_argument("--nruns", type=_parse_ints, default=list(DEFAULT_NRUNS))
    benchmark.add_argument("--ess-cutoff", type=float, default=None, help=f"ESS 구간 기준 (기본 {settings.ess_bin_cutoff:g})")
    benchmark.add_argument("--normal-calibration", action="store_true", help="Normal(0, 1) 보정 실험 실행")
    benchmark.add_argument("--lengths", type=int, default=50, help="보정 실험의 체인 길이 개수")
    benchmark.add_argument("--seed", type=int, required=True)
    benchmark.add_argument("--out", type=Path, required=True)
    _add_common(benchmark, load=False)

    bootstrap = commands.add_parser("bootstrap", help="블록 부트스트랩 수렴 추적")
    bootstrap.add_argument("tree_file", type=Path)
    bootstrap.add_argument("--kind", choices=[k.value for k in TraceKind], default=TraceKind.ASDSF.value)
    bootstrap.add_argument("--sizes", type=_parse_ints, default=None, help="쉼표 구분 부분표본 크기")
    bootstrap.add_argument("--replicates", type=int, default=None)
    bootstrap.add_argument("--thresholds", type=_parse_floats, default=None)
    bootstrap.add_argument("--seed", type=int, required=True)
    bootstrap.add_argument("--out", type=Path, required=True)
    _add_common(bootstrap)

    summarize = commands.add_parser("summarize", help="분할 / 위상 확률 표와 MRC 트리")
    summarize.add_argument("trees", nargs="+", type=Path)
    summarize.add_argument("--threshold", type=float, default=0.5, help="MRC 포함 기준 (초과)")
    summarize.add_argument("--out-dir", type=Path, required=True)
    _add_common(summarize)

    return parser


def _resolve_target(args) -> CategoricalTreeDistribution:
    if args.toy:
        return TOY_TARGETS[args.toy]()
    if args.target:
        return load_target(args.target)
    if args.target_trees:
        return build_target(load_chain(args.target_trees), args.hpd_mass, args.max_support)
    raise UsageError("--target, --target-trees, --toy 중 하나가 필요합니다.")


def _dispatch(app: TopoEssApp, args) -> dict:
    if args.command == "ess":
        methods = args.methods or [m for m in TreeEssMethod if m != TreeEssMethod.LOG_POSTERIOR]
        if TreeEssMethod.LOG_POSTERIOR in methods and not args.logs:
            raise UsageError("logPosterior 방법에는 --logs가 필요합니다.")
        if any(m.is_randomized for m in methods) and args.seed is None:
            raise UsageError("무작위 방법에는 --seed가 필요합니다.")
        return app.run_ess(
            args.trees, args.out, methods, args.logs, args.burnin, args.thin, args.seed, args.dump_distances
        )

    if args.command == "compare":
        if args.method.is_randomized and args.seed is None:
            raise UsageError("무작위 방법에는 --seed가 필요합니다.")
        if args.method == TreeEssMethod.LOG_POSTERIOR:
            raise UsageError("compare는 logPosterior 방법을 지원하지 않습니다.")
        return app.run_compare(args.trees, args.out, args.method, args.level, args.burnin, args.thin, args.seed)

    if args.command == "simulate":
        return app.run_simulate(
            _resolve_target(args), args.iterations, args.thin, args.chains, args.seed,
            args.out_dir, Proposal(args.proposal),
        )

    if args.command == "benchmark":
        if args.normal_calibration:
            return app.run_calibration(args.seed, args.out, args.m, args.lengths)
        if args.iterations is None:
            raise UsageError("benchmark에는 --iterations가 필요합니다.")
        methods = args.methods or list(TreeEssMethod)
        return app.run_benchmark(
            _resolve_target(args), args.m, args.iterations, args.thin, methods, args.seed,
            args.out, args.nruns, Proposal(args.proposal), args.ess_cutoff,
        )

    if args.command == "bootstrap":
        return app.run_bootstrap(
            args.tree_file, TraceKind(args.kind), args.seed, args.out, args.replicates,
            args.sizes, args.thresholds, args.burnin, args.thin,
        )

    return app.run_summarize(args.trees, args.out_dir, args.threshold, args.burnin, args.thin)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """CLI 진입점"""
    parser = build_parser()
    args = parser.parse_args(argv)

    # 상세 로그 모드
    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)

    app = TopoEssApp()
    try:
        stats = _dispatch(app, args)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        logger.error(f"사용법 오류: {e}")
        return EXIT_USAGE
    except (TopoEssError, ValueError, OSError) as e:
        logger.error(f"데이터 오류: {e}")
        return EXIT_DATA
    except KeyboardInterrupt:
        logger.info("\n중단됨")
        return EXIT_INTERRUPTED

    if args.strict and stats.get("degenerate", 0) > 0:
        logger.warning(f"퇴화 통계 {stats['degenerate']}건 (--strict)")
        return EXIT_DEGENERATE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
