"""Active learning against a simulated true network and the evaluation metrics."""

from .loop import ActiveLearner, LoopConfig, StepReport, oracle_respond, run_active
from .metrics import (
    confident_edges,
    edge_confidence,
    edge_entropy,
    edge_error,
    predictive_accuracy,
)
from .strategy import Strategy, StrategyKind

__all__ = [
    "ActiveLearner",
    "LoopConfig",
    "StepReport",
    "Strategy",
    "StrategyKind",
    "confident_edges",
    "edge_confidence",
    "edge_entropy",
    "edge_error",
    "oracle_respond",
    "predictive_accuracy",
    "run_active",
]
