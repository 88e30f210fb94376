"""Choosing interventions that maximize committee disagreement.

``greedy_query`` grows the query one (variable, state) pair per round,
keeping an extension only while it beats the current score by more than the
noise threshold. ``exhaustive_query`` scores every query up to a size and is
the reference the greedy search is checked against.
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Iterator, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from .committee import Committee
from .disagreement.estimate import DivergenceEstimate, EstimationMethod, Measure
from .disagreement.measures import disagreement
from .exceptions import ValidationError
from .network.inference import ENUMERATION_BUDGET
from .network.model import Intervention

logger = logging.getLogger(__name__)


class QueryConfig(BaseModel):
    """Query search settings.

    Attributes:
        measure: Disagreement measure to maximize.
        budget: Maximum number of intervened variables, or None for no limit.
        threshold_abs: Absolute floor on the gain an extension must exceed.
        threshold_z: Multiplier on the candidate's standard error in the threshold.
        candidate_vars: Variables that may be intervened on (default: all).
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    measure: Measure = Measure.KL2
    budget: int | None = Field(default=None, ge=0)
    threshold_abs: float = Field(default=1e-6, ge=0)
    threshold_z: float = Field(default=2.0, ge=0)
    candidate_vars: tuple[int, ...] | None = None

    def candidates(self, n_vars: int) -> tuple[int, ...]:
        if self.candidate_vars is None:
            return tuple(range(n_vars))
        out_of_range = [v for v in self.candidate_vars if not 0 <= v < n_vars]
        if out_of_range:
            raise ValidationError(f"Candidate variables {out_of_range} are out of range")
        return tuple(sorted(set(self.candidate_vars)))

    def max_size(self, n_vars: int) -> int:
        limit = len(self.candidates(n_vars))
        return limit if self.budget is None else min(self.budget, limit)

    def threshold(self, estimate: DivergenceEstimate) -> float:
        return max(self.threshold_abs, self.threshold_z * estimate.std_error)


def _round_seed(rng: np.random.Generator) -> int:
    return int(rng.integers(0, 2**63 - 1))


def score_query(
    c: Committee,
    q: Intervention,
    cfg: QueryConfig,
    method: EstimationMethod | None = None,
    rng: np.random.Generator | None = None,
    *,
    budget: int = ENUMERATION_BUDGET,
) -> DivergenceEstimate:
    """Disagreement of the committee about the outcome of do(q)."""
    if cfg.budget is not None and len(q) > cfg.budget:
        raise ValidationError(f"Query of size {len(q)} exceeds the budget of {cfg.budget}")
    return disagreement(cfg.measure, c, q, method, rng, budget=budget)


def _score_with_seed(
    c: Committee,
    q: Intervention,
    cfg: QueryConfig,
    method: EstimationMethod | None,
    seed: int,
    budget: int,
) -> DivergenceEstimate:
    return score_query(c, q, cfg, method, np.random.default_rng(seed), budget=budget)


def greedy_query(
    c: Committee,
    cfg: QueryConfig,
    method: EstimationMethod | None = None,
    rng: np.random.Generator | None = None,
    *,
    budget: int = ENUMERATION_BUDGET,
) -> tuple[Intervention, DivergenceEstimate]:
    """Build a query by adding the best-scoring (variable, state) pair per round.

    All candidates of a round are scored with the same random stream. Ties go
    to the lowest variable index, then the lowest state.
    """
    rng = rng or np.random.default_rng(0)
    candidates = cfg.candidates(c.n_vars)
    max_size = cfg.max_size(c.n_vars)
    arities = c.arities

    current = Intervention.empty()
    current_score = _score_with_seed(c, current, cfg, method, _round_seed(rng), budget)
    while len(current) < max_size:
        seed = _round_seed(rng)
        best: tuple[Intervention, DivergenceEstimate] | None = None
        for variable in candidates:
            if variable in current:
                continue
            for state in range(arities[variable]):
                extended = current.extended(variable, state)
                estimate = _score_with_seed(c, extended, cfg, method, seed, budget)
                if best is None or estimate.value > best[1].value:
                    best = (extended, estimate)
        if best is None:
            break
        query, estimate = best
        gain = estimate.value - current_score.value
        if gain <= cfg.threshold(estimate):
            logger.debug("Stopping at size %d: best gain %.3g below threshold", len(current), gain)
            break
        logger.debug("Round %d picked %s (score %.6g)", len(query), query.assignments, estimate.value)
        current, current_score = query, estimate
    return current, current_score


def _queries(
    candidates: Sequence[int], arities: Sequence[int], max_size: int
) -> Iterator[Intervention]:
    for size in range(max_size + 1):
        for variables in itertools.combinations(candidates, size):
            for states in itertools.product(*(range(arities[v]) for v in variables)):
                yield Intervention.of(zip(variables, states, strict=True))


def exhaustive_query(
    c: Committee,
    cfg: QueryConfig,
    method: EstimationMethod | None = None,
    rng: np.random.Generator | None = None,
    *,
    max_size: int | None = None,
    budget: int = ENUMERATION_BUDGET,
) -> tuple[Intervention, DivergenceEstimate]:
    """Score every query of at most ``max_size`` variables (default: the budget) and keep the best.

    Queries are visited by size, then variable combination, then states; ties
    keep the earliest.
    """
    rng = rng or np.random.default_rng(0)
    limit = cfg.max_size(c.n_vars) if max_size is None else min(max_size, cfg.max_size(c.n_vars))
    seed = _round_seed(rng)
    best: tuple[Intervention, DivergenceEstimate] | None = None
    for query in _queries(cfg.candidates(c.n_vars), c.arities, limit):
        estimate = _score_with_seed(c, query, cfg, method, seed, budget)
        if best is None or estimate.value > best[1].value:
            best = (query, estimate)
    assert best is not None
    return best


__all__ = ["QueryConfig", "exhaustive_query", "greedy_query", "score_query"]
