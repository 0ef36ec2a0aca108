"""
결과 파일 작성기 - TSV 표와 Markdown 요약
"""

import logging
import math
from pathlib import Path
from typing import Mapping, Optional, Sequence

import numpy as np
import pandas as pd
from jinja2 import Environment, FileSystemLoader

from ..benchmark.normal import CalibrationReport
from ..benchmark.runner import BenchmarkReport
from ..config import settings
from ..convergence.bootstrap_trace import TraceRow, trace_frame
from ..distance.matrix import DistanceMatrix
from ..intervals.comparison import SplitComparisonReport
from ..models.ess import EssEstimate
from ..models.summary import SplitProbabilities, SummaryKind, TreeProbabilities
from ..models.tree import Topology
from ..trees.newick import serialize_newick

logger = logging.getLogger(__name__)


def _quantile_range(values: np.ndarray, coverage: float) -> tuple[float, float]:
    if not len(values):
        return math.nan, math.nan
    tail = (1.0 - coverage) / 2
    low, high = np.quantile(values, [tail, 1.0 - tail])
    return float(low), float(high)


def summarize_benchmark(report: BenchmarkReport, cutoff: Optional[float] = None) -> list[dict]:
    """방법 x 요약 종류 x ESS 구간별 RMCE / ITMCE 중앙값과 50%, 80% 분위수 구간"""
    rows = []
    for method in report.methods():
        bin_label = report.ess_bin(method, cutoff)
        for kind in SummaryKind:
            records = [
                r for r in report.records_for(method, kind) if not r.comparison.degenerate
            ]
            rmce = np.array([r.comparison.rmce for r in records])
            itmce = np.array([r.comparison.itmce for r in records])
            rows.append(
                {
                    "method": method,
                    "kind": kind.value,
                    "bin": bin_label,
                    "count": len(records),
                    "rmce_median": float(np.median(rmce)) if len(rmce) else math.nan,
                    "rmce_50": _quantile_range(rmce, 0.5),
                    "rmce_80": _quantile_range(rmce, 0.8),
                    "itmce_median": float(np.median(itmce)) if len(itmce) else math.nan,
                    "itmce_50": _quantile_range(itmce, 0.5),
                    "itmce_80": _quantile_range(itmce, 0.8),
                }
            )
    return rows


class ReportWriter:
    """결정적 출력 파일 작성 (같은 입력이면 바이트 단위로 같은 파일)"""

    def __init__(self, float_format: Optional[str] = None):
        self.float_format = float_format or settings.float_format

        # 템플릿 설정
        template_dir = Path(__file__).parent / "templates"
        self.jinja_env = Environment(loader=FileSystemLoader(template_dir), keep_trailing_newline=True)
        self.jinja_env.filters["fmt"] = self._format_number

    def _format_number(self, value) -> str:
        if value is None or (isinstance(value, float) and math.isnan(value)):
            return "NA"
        return self.float_format % value

    def _write_tsv(self, frame: pd.DataFrame, path: Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(path, sep="\t", index=False, float_format=self.float_format, na_rep="NA")
        logger.info(f"저장: {path} ({len(frame)}행)")
        return path

    def write_ess_table(
        self, results: Mapping[str, Mapping[str, EssEstimate]], path: Path
    ) -> Path:
        """체인 x 방법 ESS 표 (퇴화 추정값은 degenerate 컬럼에 방법 이름으로 기록)"""
        methods = list(dict.fromkeys(m for row in results.values() for m in row))
        rows = []
        for chain, estimates in results.items():
            row = {"chain": chain, "n": next(iter(estimates.values())).n if estimates else 0}
            row.update({method: estimates[method].value for method in methods})
            row["degenerate"] = ",".join(m for m in methods if estimates[m].degenerate)
            rows.append(row)
        return self._write_tsv(pd.DataFrame(rows, columns=["chain", "n", *methods, "degenerate"]), path)

    def write_split_summary(self, probs: SplitProbabilities, path: Path) -> Path:
        """split_id, probability, count (확률 내림차순, 동률은 식별자 순)"""
        rows = [
            {"split_id": probs.split_id(split), "probability": p, "count": probs.counts.get(split, 0)}
            for split, p in probs.probs.items()
        ]
        frame = pd.DataFrame(rows, columns=["split_id", "probability", "count"])
        frame = frame.sort_values(["probability", "split_id"], ascending=[False, True], kind="stable")
        return self._write_tsv(frame, path)

    def write_tree_summary(self, probs: TreeProbabilities, path: Path) -> Path:
        rows = [
            {"newick": serialize_newick(t), "probability": p, "count": probs.counts.get(t, 0)}
            for t, p in probs.probs.items()
        ]
        frame = pd.DataFrame(rows, columns=["newick", "probability", "count"])
        frame = frame.sort_values(["probability", "newick"], ascending=[False, True], kind="stable")
        return self._write_tsv(frame, path)

    def write_newick(self, topology: Topology, path: Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(serialize_newick(topology) + "\n", encoding="utf-8")
        logger.info(f"저장: {path}")
        return path

    def write_comparison(self, report: SplitComparisonReport, path: Path) -> tuple[Path, Path]:
        """분할별 비교 표와 쌍별 요약 (<stem>_pairs.tsv)"""
        path = Path(path)
        rows_path = self._write_tsv(report.to_frame(), path)
        pairs_path = self._write_tsv(report.pairs_frame(), path.with_name(f"{path.stem}_pairs.tsv"))
        return rows_path, pairs_path

    def write_trace(self, rows: Sequence[TraceRow], path: Path) -> Path:
        return self._write_tsv(trace_frame(rows), path)

    def write_benchmark(self, report: BenchmarkReport, path: Path, cutoff: Optional[float] = None) -> list[Path]:
        """기록 표, 체인별 ESS 표 (<stem>_chain_ess.tsv), Markdown 요약 (<stem>_summary.md)"""
        path = Path(path)
        cutoff = settings.ess_bin_cutoff if cutoff is None else cutoff
        written = [
            self._write_tsv(report.to_frame(), path),
            self._write_tsv(report.chain_ess_frame(), path.with_name(f"{path.stem}_chain_ess.tsv")),
        ]

        ess_rows = [
            {
                "method": method,
                "mean_ess": report.mean_ess(method),
                "bin": report.ess_bin(method, cutoff),
                "bin_alt": report.ess_bin(method, settings.ess_bin_cutoff_alt),
            }
            for method in report.chain_ess
        ]
        template = self.jinja_env.get_template("benchmark_summary.md.j2")
        text = template.render(
            report=report,
            cutoff=cutoff,
            cutoff_alt=settings.ess_bin_cutoff_alt,
            ess_rows=ess_rows,
            rows=summarize_benchmark(report, cutoff),
        )
        summary_path = path.with_name(f"{path.stem}_summary.md")
        summary_path.write_text(text, encoding="utf-8")
        logger.info(f"저장: {summary_path}")
        written.append(summary_path)
        return written

    def write_calibration(self, report: CalibrationReport, path: Path) -> Path:
        return self._write_tsv(report.to_frame(), path)

    def write_distances(self, distances: DistanceMatrix, path: Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        distances.to_tsv(path)
        logger.info(f"거리 행렬 저장: {path} ({distances.n} x {distances.n})")
        return path
