"""
topoess - 계통수 MCMC 표본의 위상 유효표본크기(ESS)와 몬테카를로 오차 진단
"""

__version__ = "0.1.0"
