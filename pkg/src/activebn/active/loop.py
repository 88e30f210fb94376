"""The closed active-learning loop against a simulated true network."""

from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Any, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from activebn.committee import Committee, build_committee
from activebn.data.dataset import Dataset, Record, bootstrap_resample
from activebn.disagreement.estimate import DivergenceEstimate, EstimationMethod
from activebn.learning.config import ScoreConfig, SearchConfig
from activebn.learning.search import local_search, search_structure
from activebn.network.inference import forward_sample
from activebn.network.model import BayesNet, Intervention
from activebn.query import QueryConfig, greedy_query

from .metrics import confident_edges, edge_confidence, edge_entropy, edge_error, predictive_accuracy
from .strategy import Strategy, StrategyKind

logger = logging.getLogger(__name__)

StreamFactory = Callable[..., np.random.Generator]

CONFIDENCE_THRESHOLDS = (0.9, 0.5, 0.3)


class LoopConfig(BaseModel):
    """Active-loop settings.

    Attributes:
        steps: Number of acquisition steps T.
        initial_observational: Observational records N0 drawn before the first step.
        committee_size: Committee members K built per rebuild.
        rebuild_every: Rebuild the committee every this many steps.
        eval_every: Evaluate every this many steps (0: only after the last step).
        bootstrap_eval_count: Bootstrap structures B behind the edge metrics.
        predictive_sizes: Intervention sizes of the predictive KL columns.
        predictive_trials: Random interventions per size when not enumerated.
        estimation: Divergence computation: exact, sampled or auto.
        n_samples: Forward samples per Monte-Carlo estimate.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    steps: int = Field(default=0, ge=0)
    initial_observational: int = Field(default=20, ge=1)
    committee_size: int = Field(default=2, ge=1)
    rebuild_every: int = Field(default=1, ge=1)
    eval_every: int = Field(default=0, ge=0)
    bootstrap_eval_count: int = Field(default=50, ge=2)
    predictive_sizes: tuple[int, ...] = (0, 1, 5, 10)
    predictive_trials: int = Field(default=100, ge=1)
    estimation: Literal["auto", "exact", "sampled"] = "auto"
    n_samples: int = Field(default=2000, ge=1)

    def method(self) -> EstimationMethod:
        return EstimationMethod(kind=self.estimation, n_samples=self.n_samples)

    def eval_steps(self) -> set[int]:
        steps = {self.steps}
        if self.eval_every > 0:
            steps.update(range(0, self.steps, self.eval_every))
        return steps


@dataclass(frozen=True, slots=True)
class StepReport:
    """Metrics after ``step`` acquisitions; ``query`` is the one made at that step."""

    step: int
    strategy: str
    query: str
    query_size: int
    mean_query_size: float
    measure: str
    score: float
    score_se: float
    edge_error: float
    edge_entropy: float
    confident_edges: dict[float, int] = field(default_factory=dict)
    predictive: dict[int, float | None] = field(default_factory=dict)

    def to_row(self) -> dict[str, Any]:
        row: dict[str, Any] = {
            "step": self.step,
            "strategy": self.strategy,
            "query": self.query,
            "query_size": self.query_size,
            "mean_query_size": self.mean_query_size,
            "measure": self.measure,
            "score": self.score,
            "score_se": self.score_se,
            "edge_error": self.edge_error,
            "edge_entropy": self.edge_entropy,
        }
        for threshold, count in self.confident_edges.items():
            row[f"edges_p{round(threshold * 100)}"] = count
        for size, value in self.predictive.items():
            row[f"pkl{size}"] = value
        return row


def oracle_respond(true_net: BayesNet, q: Intervention, rng: np.random.Generator) -> Record:
    """One sample of the true network under do(q), flagged on the intervened variables."""
    values = forward_sample(true_net, q, 1, rng)[0]
    return Record.observed(values.tolist(), q)


def initial_data(true_net: BayesNet, n: int, rng: np.random.Generator) -> Dataset:
    samples = forward_sample(true_net, Intervention.empty(), n, rng)
    return Dataset.from_samples(true_net.variables, samples, Intervention.empty())


def _random_query(true_net: BayesNet, size: int, rng: np.random.Generator) -> Intervention:
    size = min(size, true_net.n_vars)
    variables = rng.choice(true_net.n_vars, size=size, replace=False)
    arities = true_net.arities
    return Intervention.of((int(v), int(rng.integers(arities[v]))) for v in variables)


@dataclass(slots=True)
class _LoopState:
    ds: Dataset
    committee: Committee | None = None
    query: Intervention = field(default_factory=Intervention.empty)
    estimate: DivergenceEstimate | None = None
    queries: list[Intervention] = field(default_factory=list)

    @property
    def query_sizes(self) -> list[int]:
        return [len(q) for q in self.queries]


class ActiveLearner:
    """Runs one strategy against one true network; every stage draws from ``streams``."""

    def __init__(
        self,
        true_net: BayesNet,
        strategy: Strategy,
        lc: LoopConfig,
        *,
        score_config: ScoreConfig,
        search_config: SearchConfig,
        query_config: QueryConfig,
        streams: StreamFactory,
    ) -> None:
        self.true_net = true_net
        self.strategy = strategy
        self.lc = lc
        self.score_config = score_config
        self.search_config = search_config
        if strategy.measure is not None:
            query_config = query_config.model_copy(update={"measure": strategy.measure})
        self.query_config = query_config
        self.streams = streams
        self.method = lc.method()
        self._skipped_sizes: set[int] = set()
        self._state: _LoopState | None = None

    @property
    def dataset(self) -> Dataset | None:
        """Data gathered by the last ``run``, initial records first."""
        return self._state.ds if self._state is not None else None

    @property
    def queries(self) -> tuple[Intervention, ...]:
        """Query made at each step of the last ``run``."""
        return tuple(self._state.queries) if self._state is not None else ()

    def choose(self, state: _LoopState, step: int) -> None:
        kind = self.strategy.kind
        if kind is StrategyKind.PASSIVE:
            state.query, state.estimate = Intervention.empty(), None
        elif kind is StrategyKind.RANDOM:
            rng = self.streams(self.strategy.label, step, "query")
            state.query, state.estimate = _random_query(self.true_net, self.strategy.size, rng), None
        else:
            if state.committee is None or (step - 1) % self.lc.rebuild_every == 0:
                state.committee = build_committee(
                    state.ds,
                    self.lc.committee_size,
                    self.score_config,
                    self.search_config,
                    self.streams(self.strategy.label, step, "committee"),
                )
            state.query, state.estimate = greedy_query(
                state.committee,
                self.query_config,
                self.method,
                self.streams(self.strategy.label, step, "query"),
            )

    def evaluate(self, state: _LoopState, step: int) -> StepReport:
        label = self.strategy.label
        streams = self.streams(label, step, "evaluation").spawn(self.lc.bootstrap_eval_count)
        boot_dags = [
            search_structure(bootstrap_resample(state.ds, s), self.score_config, self.search_config, s).dag
            for s in streams
        ]
        confidence = edge_confidence(boot_dags)

        learned = local_search(
            state.ds, self.score_config, self.search_config, self.streams(label, step, "fit")
        )
        predictive: dict[int, float | None] = {}
        for size in self.lc.predictive_sizes:
            if size > self.true_net.n_vars:
                if size not in self._skipped_sizes:
                    logger.warning(
                        "Skipping predictive KL for size %d on %d variables", size, self.true_net.n_vars
                    )
                    self._skipped_sizes.add(size)
                predictive[size] = None
                continue
            predictive[size] = predictive_accuracy(
                self.true_net,
                learned,
                size,
                self.lc.predictive_trials,
                self.streams(label, step, "predictive", size),
                self.method,
            )

        sizes = state.query_sizes
        estimate = state.estimate
        measure = str(self.strategy.measure) if self.strategy.measure is not None else "none"
        return StepReport(
            step=step,
            strategy=label,
            query=state.query.label(self.true_net.names),
            query_size=len(state.query),
            mean_query_size=float(np.mean(sizes)) if sizes else 0.0,
            measure=measure,
            score=estimate.value if estimate is not None else 0.0,
            score_se=estimate.std_error if estimate is not None else 0.0,
            edge_error=edge_error(boot_dags, self.true_net.dag),
            edge_entropy=edge_entropy(boot_dags),
            confident_edges={
                t: len(confident_edges(confidence, t)) for t in CONFIDENCE_THRESHOLDS
            },
            predictive=predictive,
        )

    def run(self, initial: Dataset | None = None) -> list[StepReport]:
        if initial is None:
            initial = initial_data(
                self.true_net, self.lc.initial_observational, self.streams("initial")
            )
        state = self._state = _LoopState(ds=initial)
        eval_steps = self.lc.eval_steps()
        reports = []
        for step in range(self.lc.steps + 1):
            if step > 0:
                self.choose(state, step)
                record = oracle_respond(
                    self.true_net, state.query, self.streams(self.strategy.label, step, "oracle")
                )
                state.ds = state.ds.append(record)
                state.queries.append(state.query)
            if step in eval_steps:
                report = self.evaluate(state, step)
                logger.info(
                    "%s step %d: edge_error=%.3f edge_entropy=%.3f",
                    report.strategy,
                    step,
                    report.edge_error,
                    report.edge_entropy,
                )
                reports.append(report)
        return reports


def run_active(
    true_net: BayesNet,
    strategy: Strategy,
    lc: LoopConfig,
    *,
    streams: StreamFactory,
    score_config: ScoreConfig | None = None,
    search_config: SearchConfig | None = None,
    query_config: QueryConfig | None = None,
    initial: Dataset | None = None,
) -> list[StepReport]:
    """Run ``lc.steps`` acquisitions of ``strategy`` and report on every evaluation step.

    ``streams(*labels)`` must return a generator determined by the labels
    alone; ``initial`` overrides the ``("initial",)`` observational draw so
    several strategies can share it.
    """
    learner = ActiveLearner(
        true_net,
        strategy,
        lc,
        score_config=score_config or ScoreConfig(),
        search_config=search_config or SearchConfig(),
        query_config=query_config or QueryConfig(),
        streams=streams,
    )
    return learner.run(initial)


__all__ = [
    "ActiveLearner",
    "LoopConfig",
    "StepReport",
    "StreamFactory",
    "initial_data",
    "oracle_respond",
    "run_active",
]
