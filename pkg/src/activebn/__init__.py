from importlib.metadata import version

from .active import LoopConfig, StepReport, Strategy, run_active
from .committee import Committee, build_committee, load_committee, save_committee
from .data import Dataset, Record, bootstrap_resample, read_dataset, read_network
from .disagreement import (
    DivergenceEstimate,
    EstimationMethod,
    Measure,
    bjs,
    committee_posterior,
    js,
    kl2,
    kl_between,
)
from .exceptions import (
    ActiveBNError,
    ConfigError,
    EmptyDataError,
    EnumerationTooLargeError,
    InfiniteDivergenceError,
    UndefinedPosteriorError,
    ValidationError,
)
from .learning import ScoreConfig, SearchConfig, local_search
from .network import BayesNet, Dag, Intervention, Variable, forward_sample, mutilate
from .query import QueryConfig, exhaustive_query, greedy_query, score_query

__version__ = version("activebn")

__all__ = [
    "ActiveBNError",
    "BayesNet",
    "Committee",
    "ConfigError",
    "Dag",
    "Dataset",
    "DivergenceEstimate",
    "EmptyDataError",
    "EnumerationTooLargeError",
    "EstimationMethod",
    "InfiniteDivergenceError",
    "Intervention",
    "LoopConfig",
    "Measure",
    "QueryConfig",
    "Record",
    "ScoreConfig",
    "SearchConfig",
    "StepReport",
    "Strategy",
    "UndefinedPosteriorError",
    "ValidationError",
    "Variable",
    "bjs",
    "bootstrap_resample",
    "build_committee",
    "committee_posterior",
    "exhaustive_query",
    "forward_sample",
    "greedy_query",
    "js",
    "kl2",
    "kl_between",
    "load_committee",
    "local_search",
    "mutilate",
    "read_dataset",
    "read_network",
    "run_active",
    "save_committee",
    "score_query",
]
