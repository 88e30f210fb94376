"""Greedy hill climbing over DAGs with add, delete and reverse moves."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import IntEnum

import networkx as nx
import numpy as np

from activebn.data.dataset import Dataset
from activebn.exceptions import EmptyDataError
from activebn.network.model import BayesNet, Dag

from .config import ScoreConfig, SearchConfig
from .score import family_log_score, fit_parameters

logger = logging.getLogger(__name__)

# Moves must beat the current score by more than this to count as improvements.
_MIN_IMPROVEMENT = 1e-10


class MoveType(IntEnum):
    ADD = 0
    DELETE = 1
    REVERSE = 2


@dataclass(frozen=True, slots=True)
class Move:
    child: int
    parent: int
    kind: MoveType
    delta: float


@dataclass(frozen=True, slots=True)
class SearchResult:
    """Best structure found and its log score."""

    dag: Dag
    score: float


class FamilyScorer:
    """Memoized family_log_score for one dataset; keys ignore parent order."""

    def __init__(self, ds: Dataset, cfg: ScoreConfig) -> None:
        self.ds = ds
        self.cfg = cfg
        self._cache: dict[tuple[int, tuple[int, ...]], float] = {}

    def __call__(self, child: int, parents: set[int] | tuple[int, ...]) -> float:
        key = (child, tuple(sorted(parents)))
        score = self._cache.get(key)
        if score is None:
            score = family_log_score(self.ds, child, key[1], self.cfg)
            self._cache[key] = score
        return score


def _reverse_creates_cycle(graph: nx.DiGraph, parent: int, child: int) -> bool:
    graph.remove_edge(parent, child)
    try:
        return nx.has_path(graph, parent, child)
    finally:
        graph.add_edge(parent, child)


def _best_move(
    parent_sets: list[set[int]],
    family: list[float],
    graph: nx.DiGraph,
    scorer: FamilyScorer,
    max_parents: int,
) -> Move | None:
    n_vars = len(parent_sets)
    best: Move | None = None
    for child in range(n_vars):
        parents = parent_sets[child]
        for parent in range(n_vars):
            if parent == child:
                continue
            candidates: list[tuple[MoveType, float]] = []
            if parent not in parents:
                if len(parents) < max_parents and not nx.has_path(graph, child, parent):
                    delta = scorer(child, parents | {parent}) - family[child]
                    candidates.append((MoveType.ADD, delta))
            else:
                removed = scorer(child, parents - {parent}) - family[child]
                candidates.append((MoveType.DELETE, removed))
                if len(parent_sets[parent]) < max_parents and not _reverse_creates_cycle(
                    graph, parent, child
                ):
                    gained = scorer(parent, parent_sets[parent] | {child}) - family[parent]
                    candidates.append((MoveType.REVERSE, removed + gained))
            for kind, delta in candidates:
                threshold = _MIN_IMPROVEMENT if best is None else best.delta
                if delta > threshold:
                    best = Move(child=child, parent=parent, kind=kind, delta=delta)
    return best


def _climb(
    parent_sets: list[set[int]],
    scorer: FamilyScorer,
    cfg: ScoreConfig,
    scfg: SearchConfig,
) -> SearchResult:
    n_vars = len(parent_sets)
    graph = nx.DiGraph()
    graph.add_nodes_from(range(n_vars))
    graph.add_edges_from((p, c) for c, ps in enumerate(parent_sets) for p in ps)
    family = [scorer(j, parent_sets[j]) for j in range(n_vars)]

    for _ in range(scfg.max_flips):
        move = _best_move(parent_sets, family, graph, scorer, cfg.max_parents)
        if move is None:
            break
        child, parent = move.child, move.parent
        if move.kind is MoveType.ADD:
            parent_sets[child].add(parent)
            graph.add_edge(parent, child)
        else:
            parent_sets[child].discard(parent)
            graph.remove_edge(parent, child)
            if move.kind is MoveType.REVERSE:
                parent_sets[parent].add(child)
                graph.add_edge(child, parent)
                family[parent] = scorer(parent, parent_sets[parent])
        family[child] = scorer(child, parent_sets[child])
        logger.debug("Accepted %s %d->%d (delta=%.6g)", move.kind.name, parent, child, move.delta)

    dag = Dag(parents=tuple(tuple(sorted(ps)) for ps in parent_sets))
    return SearchResult(dag=dag, score=float(sum(family)))


def _random_start(n_vars: int, cfg: ScoreConfig, scfg: SearchConfig, rng: np.random.Generator) -> list[set[int]]:
    order = rng.permutation(n_vars)
    parent_sets: list[set[int]] = [set() for _ in range(n_vars)]
    for i in range(n_vars):
        for j in range(i + 1, n_vars):
            parent, child = int(order[i]), int(order[j])
            if (
                rng.random() < scfg.restart_edge_probability
                and len(parent_sets[child]) < cfg.max_parents
            ):
                parent_sets[child].add(parent)
    return parent_sets


def search_structure(
    ds: Dataset,
    cfg: ScoreConfig,
    scfg: SearchConfig,
    rng: np.random.Generator,
) -> SearchResult:
    """Hill-climb from the empty graph and ``restarts - 1`` random DAGs; keep the best."""
    if len(ds) == 0:
        raise EmptyDataError("Structure search needs at least one record")
    scorer = FamilyScorer(ds, cfg)
    best: SearchResult | None = None
    for restart in range(scfg.restarts):
        if restart == 0:
            start: list[set[int]] = [set() for _ in range(ds.n_vars)]
        else:
            start = _random_start(ds.n_vars, cfg, scfg, rng)
        result = _climb(start, scorer, cfg, scfg)
        logger.debug("Restart %d finished with score %.6f", restart, result.score)
        if best is None or result.score > best.score + _MIN_IMPROVEMENT:
            best = result
    assert best is not None
    return best


def local_search(
    ds: Dataset,
    cfg: ScoreConfig,
    scfg: SearchConfig,
    rng: np.random.Generator,
) -> BayesNet:
    """Learn a network: best hill-climbing structure with fitted parameters."""
    result = search_structure(ds, cfg, scfg, rng)
    return fit_parameters(result.dag, ds, cfg)


__all__ = [
    "FamilyScorer",
    "MoveType",
    "SearchResult",
    "local_search",
    "search_structure",
]
