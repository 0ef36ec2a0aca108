"""
ESS 추정기 베이스 클래스
"""

from abc import ABC, abstractmethod
from typing import Optional
import logging

from ..distance.matrix import DistanceMatrix
from ..models.ess import EssEstimate
from ..models.tree import Chain

logger = logging.getLogger(__name__)


class TreeEssEstimator(ABC):
    """위상 ESS 추정기 베이스 클래스"""

    name: str = "unknown"
    needs_distances: bool = True

    @abstractmethod
    def estimate(
        self, chain: Chain, distances: Optional[DistanceMatrix] = None, seed=None
    ) -> EssEstimate:
        """체인의 ESS 추정"""
        pass

    def _log_debug(self, message: str):
        logger.debug(f"[{self.name}] {message}")

    def _log_info(self, message: str):
        logger.info(f"[{self.name}] {message}")

    def _log_warning(self, message: str):
        logger.warning(f"[{self.name}] {message}")
