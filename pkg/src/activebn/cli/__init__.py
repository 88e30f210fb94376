"""Command-line front end and experiment harness."""

from .config import ExperimentConfig
from .experiment import ExperimentResult, run_experiment
from .main import main
from .seeds import derive_rng

__all__ = ["ExperimentConfig", "ExperimentResult", "derive_rng", "main", "run_experiment"]
