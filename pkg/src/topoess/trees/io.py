"""
트리 파일 / 로그 파일 입출력

트리 파일: UTF-8 텍스트, 한 줄에 Newick 트리 하나 (빈 줄과 '#' 줄은 무시)
로그 파일: 헤더가 있는 TSV, 로그 밀도 컬럼(기본 lnP)의 i번째 행이 i번째 트리와 대응
"""

import logging
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
import pandas as pd

from ..config import settings
from ..models.tree import Chain, TaxonMap, Topology
from .newick import parse_newick, serialize_newick

logger = logging.getLogger(__name__)


def read_tree_file(path: Path, taxa: Optional[TaxonMap] = None) -> list[Topology]:
    """트리 파일의 모든 위상 읽기 (첫 트리가 TaxonMap을 정함)"""
    path = Path(path)
    topologies = []
    cache: dict[str, Topology] = {}

    with open(path, "r", encoding="utf-8") as f:
        for line_no, raw in enumerate(f, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            topology = cache.get(line)
            if topology is None:
                try:
                    topology = parse_newick(line, taxa)
                except ValueError as e:
                    raise type(e)(f"{path}:{line_no}: {e}") from e
                taxa = topology.taxa
                cache[line] = topology
            topologies.append(topology)

    logger.debug(f"{path}: 트리 {len(topologies)}개 (고유 문자열 {len(cache)}개)")
    return topologies


def read_log_density(path: Path, column: Optional[str] = None) -> np.ndarray:
    """로그 TSV에서 로그 밀도 컬럼 읽기"""
    column = column or settings.log_density_column
    frame = pd.read_csv(path, sep="\t", comment="#")
    if column not in frame.columns:
        raise ValueError(f"{path}: '{column}' 컬럼이 없습니다 (컬럼: {list(frame.columns)})")
    return frame[column].to_numpy(dtype=float)


def load_chain(
    tree_path: Path,
    log_path: Optional[Path] = None,
    taxa: Optional[TaxonMap] = None,
    burnin: int = 0,
    thin: int = 1,
    column: Optional[str] = None,
    name: Optional[str] = None,
) -> Chain:
    """트리 파일(+로그 파일)을 읽어 burn-in 제거와 솎아내기를 적용한 체인 생성"""
    tree_path = Path(tree_path)
    samples = read_tree_file(tree_path, taxa)
    if not samples:
        raise ValueError(f"{tree_path}: 트리가 없습니다.")

    log_density = None
    if log_path is not None:
        log_density = read_log_density(log_path, column)
        if len(log_density) != len(samples):
            raise ValueError(
                f"{log_path}: 로그 행 수({len(log_density)})가 "
                f"트리 수({len(samples)})와 다릅니다."
            )

    chain = Chain(
        taxa=samples[0].taxa,
        samples=samples,
        log_density=log_density,
        name=name or tree_path.stem,
    )
    if burnin or thin != 1:
        chain = chain.thinned(burnin=burnin, thin=thin)
        if not len(chain):
            raise ValueError(f"{tree_path}: burn-in/솎아내기 후 남은 표본이 없습니다.")
    logger.info(f"체인 로드: {chain.name} ({len(chain)}개 표본, 분류군 {chain.taxa.n_taxa}개)")
    return chain


def load_chains(
    tree_paths: Sequence[Path],
    log_paths: Optional[Sequence[Path]] = None,
    burnin: int = 0,
    thin: int = 1,
    column: Optional[str] = None,
) -> list[Chain]:
    """여러 체인을 같은 TaxonMap으로 로드"""
    if log_paths is not None and len(log_paths) != len(tree_paths):
        raise ValueError("로그 파일 수가 트리 파일 수와 다릅니다.")

    chains = []
    taxa = None
    for i, tree_path in enumerate(tree_paths):
        log_path = log_paths[i] if log_paths is not None else None
        chain = load_chain(tree_path, log_path, taxa, burnin, thin, column)
        taxa = chain.taxa
        chains.append(chain)
    Chain.check_shared_taxa(chains)
    return chains


def write_chain(chain: Chain, tree_path: Path, log_path: Optional[Path] = None):
    """체인을 Newick 줄 파일(+로그 밀도 TSV)로 저장"""
    tree_path = Path(tree_path)
    tree_path.parent.mkdir(parents=True, exist_ok=True)

    cache: dict[Topology, str] = {}
    with open(tree_path, "w", encoding="utf-8") as f:
        for topology in chain.samples:
            text = cache.get(topology)
            if text is None:
                text = serialize_newick(topology)
                cache[topology] = text
            f.write(text + "\n")

    if log_path is not None and chain.log_density is not None:
        frame = pd.DataFrame(
            {
                "sample": np.arange(len(chain)),
                settings.log_density_column: chain.log_density,
            }
        )
        frame.to_csv(log_path, sep="\t", index=False, float_format=settings.float_format)
