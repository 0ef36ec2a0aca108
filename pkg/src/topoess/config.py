"""
설정 관리 모듈
"""

from pydantic_settings import BaseSettings
from dotenv import load_dotenv

# .env 파일 로드
load_dotenv()


class Settings(BaseSettings):
    """애플리케이션 설정"""

    # 로깅
    log_level: str = "INFO"

    # 계통수 입력
    max_taxa: int = 4096  # TaxonMap 최대 분류군 수
    log_density_column: str = "lnP"  # 로그 파일의 로그 밀도 컬럼명

    # 사후 요약
    asdsf_min_freq: float = 0.1  # ASDSF 포함 분할의 최소 빈도 (한 체인 이상)
    report_split_min_prob: float = 0.01  # 벤치마크에 포함할 분할의 최소 풀링 확률
    tree_report_cap: int = 1000  # 벤치마크 위상 확률 항목 상한
    ess_bin_cutoff: float = 500.0
    ess_bin_cutoff_alt: float = 250.0

    # 가짜 MCMC 목표 분포
    hpd_mass: float = 0.95
    max_support: int = 4096

    # 점프 거리 부트스트랩 ESS
    jump_alpha: float = 0.05
    jump_n_boot: int = 200

    # CMDS 최대 고유값 0 판정 (상대 허용오차)
    cmds_tol: float = 1e-10

    # 블록 부트스트랩 추적
    bootstrap_replicates: int = 100
    bootstrap_sizes: int = 10
    bootstrap_min_size: int = 100
    consensus_thresholds: list[float] = [0.5, 0.75, 0.95]

    # 신뢰구간
    ci_level: float = 0.95

    # 수치 안정화
    variance_floor: float = 1e-12  # 배치 평균 극한분산 하한

    # 출력
    float_format: str = "%.10g"

    class Config:
        env_file = ".env"
        env_file_encoding = "utf-8"
        env_prefix = "TOPOESS_"


# 전역 설정 인스턴스
settings = Settings()
