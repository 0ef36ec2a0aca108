from .tree import TaxonMap, Split, Topology, Chain
from .ess import TreeEssMethod, AutocorrSeries, EssEstimate
from .summary import SummaryKind, SplitProbabilities, TreeProbabilities, ErrorComparison

__all__ = [
    "TaxonMap",
    "Split",
    "Topology",
    "Chain",
    "TreeEssMethod",
    "AutocorrSeries",
    "EssEstimate",
    "SummaryKind",
    "SplitProbabilities",
    "TreeProbabilities",
    "ErrorComparison",
]
