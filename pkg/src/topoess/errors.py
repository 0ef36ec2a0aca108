"""
예외 정의
"""


class TopoEssError(Exception):
    """topoess 공통 예외"""


class NewickParseError(TopoEssError, ValueError):
    """Newick 문자열 파싱 실패 (문법 오류, 중복 라벨, 분류군 부족)"""


class TaxonMismatchError(TopoEssError, ValueError):
    """서로 다른 TaxonMap을 가진 위상/체인을 함께 사용"""


class DegenerateSeriesError(TopoEssError, ValueError):
    """상수 시계열 등 통계량이 정의되지 않는 경우"""


class InsufficientSamplesError(TopoEssError, ValueError):
    """표본 수가 연산의 최소 요구치보다 적음"""


class TargetError(TopoEssError, ValueError):
    """가짜 MCMC 목표 분포가 유효하지 않음"""
