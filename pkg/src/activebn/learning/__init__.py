"""BDeu scoring, parameter fitting and hill-climbing structure search."""

from .config import ScoreConfig, SearchConfig
from .score import family_counts, family_log_score, fit_parameters, structure_score
from .search import FamilyScorer, SearchResult, local_search, search_structure

__all__ = [
    "FamilyScorer",
    "ScoreConfig",
    "SearchConfig",
    "SearchResult",
    "family_counts",
    "family_log_score",
    "fit_parameters",
    "local_search",
    "search_structure",
    "structure_score",
]
