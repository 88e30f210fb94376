"""Random sparse networks and random parameters for a given structure."""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from activebn.exceptions import ValidationError

from ._validation import require_positive_int
from .model import BayesNet, Cpt, Dag, Variable

# Fraction of each random row mixed with the uniform row; keeps entries away from 0.
_UNIFORM_MIX = 0.02


def random_parameters(
    variables: Sequence[Variable],
    dag: Dag,
    rng: np.random.Generator,
    *,
    concentration: float = 1.0,
) -> BayesNet:
    """Attach strictly positive random CPTs to a structure.

    Each row is a Dirichlet(concentration) draw mixed with a little of the
    uniform row.
    """
    if concentration <= 0:
        raise ValidationError("concentration must be > 0")
    arities = [v.arity for v in variables]
    cpts = []
    for child, parents in enumerate(dag.parents):
        parent_arities = tuple(arities[p] for p in parents)
        n_rows = int(np.prod(parent_arities, dtype=np.int64))
        draws = rng.dirichlet(np.full(arities[child], concentration), size=n_rows)
        rows = (1 - _UNIFORM_MIX) * draws + _UNIFORM_MIX / arities[child]
        rows /= rows.sum(axis=1, keepdims=True)
        cpts.append(
            Cpt(child=child, parents=parents, parent_arities=parent_arities, probs=rows)
        )
    return BayesNet(variables=tuple(variables), dag=dag, cpts=tuple(cpts))


def random_dag(
    n_vars: int,
    max_edges: int,
    rng: np.random.Generator,
    *,
    max_parents: int = 3,
) -> Dag:
    """Sample a sparse DAG consistent with a random variable order.

    Candidate edges (earlier -> later in the order) are visited in random
    order and kept until ``max_edges`` is reached, skipping children that
    already have ``max_parents`` parents.
    """
    n_vars = require_positive_int(n_vars, field_name="n_vars")
    order = rng.permutation(n_vars)
    candidates = [
        (int(order[i]), int(order[j])) for i in range(n_vars) for j in range(i + 1, n_vars)
    ]
    parents: list[list[int]] = [[] for _ in range(n_vars)]
    kept = 0
    for index in rng.permutation(len(candidates)):
        if kept >= max_edges:
            break
        parent, child = candidates[index]
        if len(parents[child]) >= max_parents:
            continue
        parents[child].append(parent)
        kept += 1
    return Dag(parents=tuple(tuple(sorted(ps)) for ps in parents))


def random_network(
    n_vars: int,
    max_arity: int,
    max_edges: int,
    rng: np.random.Generator,
    *,
    max_parents: int = 3,
    concentration: float = 1.0,
) -> BayesNet:
    """Random sparse network with arities drawn uniformly from ``2..max_arity``."""
    require_positive_int(max_arity, field_name="max_arity", minimum=2)
    variables = tuple(
        Variable.with_arity(f"X{i}", int(rng.integers(2, max_arity + 1))) for i in range(n_vars)
    )
    dag = random_dag(n_vars, max_edges, rng, max_parents=max_parents)
    return random_parameters(variables, dag, rng, concentration=concentration)


__all__ = ["random_dag", "random_network", "random_parameters"]
