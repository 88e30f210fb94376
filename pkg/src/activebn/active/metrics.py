"""Structure and prediction quality of learned networks.

The edge metrics look at every unordered variable pair {i, j} (i < j) and
its relation in a graph: no edge, i -> j, or j -> i. Over a set of
bootstrap-learned structures each pair gets an empirical distribution over
the three relations.
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Sequence

import numpy as np
from scipy.special import entr

from activebn.disagreement.estimate import EstimationMethod
from activebn.disagreement.kl import kl_between
from activebn.exceptions import SchemaMismatchError, ValidationError
from activebn.network.inference import ENUMERATION_BUDGET
from activebn.network.model import BayesNet, Dag, Intervention

logger = logging.getLogger(__name__)

NO_EDGE, FORWARD, BACKWARD = 0, 1, 2

# Above this many variables, single-variable interventions are sampled too.
EXHAUSTIVE_VARIABLE_LIMIT = 12


def pair_relations(dag: Dag) -> np.ndarray:
    """Relation code of every pair (i, j), i < j, in ``itertools.combinations`` order."""
    pairs = itertools.combinations(range(dag.n_vars), 2)
    codes = [
        FORWARD if dag.has_edge(i, j) else BACKWARD if dag.has_edge(j, i) else NO_EDGE
        for i, j in pairs
    ]
    return np.array(codes, dtype=np.int64)


def relation_frequencies(dags: Sequence[Dag]) -> np.ndarray:
    """``(n_pairs, 3)`` empirical relation distribution across ``dags``."""
    if not dags:
        raise ValidationError("Edge metrics need at least one structure")
    n_vars = dags[0].n_vars
    if any(d.n_vars != n_vars for d in dags):
        raise SchemaMismatchError("Structures are over different numbers of variables")
    relations = np.stack([pair_relations(d) for d in dags])
    n_pairs = relations.shape[1]
    counts = np.zeros((n_pairs, 3))
    for code in (NO_EDGE, FORWARD, BACKWARD):
        counts[:, code] = (relations == code).sum(axis=0)
    return counts / len(dags)


def edge_error(boot_dags: Sequence[Dag], true_dag: Dag) -> float:
    """Expected number of pairs whose relation differs from the true one."""
    frequencies = relation_frequencies(boot_dags)
    if true_dag.n_vars != boot_dags[0].n_vars:
        raise SchemaMismatchError("True structure and bootstrap structures differ in size")
    truth = pair_relations(true_dag)
    return float(np.sum(1.0 - frequencies[np.arange(truth.size), truth]))


def edge_entropy(boot_dags: Sequence[Dag]) -> float:
    """Sum over pairs of the entropy (nats) of their relation distribution."""
    if len(boot_dags) < 2:
        raise ValidationError("Edge entropy needs at least two structures")
    return float(entr(relation_frequencies(boot_dags)).sum())


def edge_confidence(boot_dags: Sequence[Dag]) -> np.ndarray:
    """``conf[i, j]`` is the fraction of structures containing the edge i -> j."""
    if not boot_dags:
        raise ValidationError("Edge confidence needs at least one structure")
    n_vars = boot_dags[0].n_vars
    counts = np.zeros((n_vars, n_vars))
    for dag in boot_dags:
        if dag.n_vars != n_vars:
            raise SchemaMismatchError("Structures are over different numbers of variables")
        for parent, child in dag.edges():
            counts[parent, child] += 1
    return counts / len(boot_dags)


def confident_edges(confidence: np.ndarray, threshold: float) -> list[tuple[int, int]]:
    """Edges whose bootstrap frequency exceeds ``threshold``, sorted by (parent, child)."""
    parents, children = np.nonzero(confidence > threshold)
    return [(int(p), int(c)) for p, c in zip(parents, children, strict=True)]


def interventions_of_size(
    net: BayesNet, k: int, trials: int, rng: np.random.Generator
) -> list[Intervention]:
    """All size-k interventions for k <= 1 on small nets, else ``trials`` random ones."""
    n_vars = net.n_vars
    if not 0 <= k <= n_vars:
        raise ValidationError(f"Cannot intervene on {k} of {n_vars} variables")
    if k == 0:
        return [Intervention.empty()]
    arities = net.arities
    if k == 1 and n_vars <= EXHAUSTIVE_VARIABLE_LIMIT:
        return [Intervention.of([(v, s)]) for v in range(n_vars) for s in range(arities[v])]
    queries = []
    for _ in range(trials):
        variables = rng.choice(n_vars, size=k, replace=False)
        queries.append(Intervention.of((int(v), int(rng.integers(arities[v]))) for v in variables))
    return queries


def predictive_accuracy(
    true_net: BayesNet,
    learned: BayesNet,
    k: int,
    trials: int,
    rng: np.random.Generator,
    method: EstimationMethod | None = None,
    *,
    budget: int = ENUMERATION_BUDGET,
) -> float:
    """Mean KL(true || learned) over size-k interventions (k = 0 is the observational case)."""
    if not true_net.same_schema(learned):
        raise SchemaMismatchError("True and learned networks are over different variables")
    queries = interventions_of_size(true_net, k, trials, rng)
    values = [kl_between(true_net, learned, q, method, rng, budget=budget).value for q in queries]
    return float(np.mean(values))


__all__ = [
    "confident_edges",
    "edge_confidence",
    "edge_entropy",
    "edge_error",
    "interventions_of_size",
    "pair_relations",
    "predictive_accuracy",
    "relation_frequencies",
]
