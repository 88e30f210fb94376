"""Intervention semantics, exact inference by enumeration and forward sampling.

All functions here are pure. Intervened variables are handled through the
mutilated network: edges into them are removed and their CPT becomes a
single degenerate row on the forced state.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Self

import numpy as np
from scipy.special import entr

from activebn.exceptions import EnumerationTooLargeError, ValidationError

from ._validation import as_assignment, as_assignment_matrix, require_positive_int
from .model import BayesNet, Cpt, Dag, Intervention

logger = logging.getLogger(__name__)

# Largest joint state count exact enumeration will visit.
ENUMERATION_BUDGET = 2**20


@dataclass(frozen=True, slots=True)
class MarginalSource:
    """Where parent-configuration marginals come from: enumeration or ``n`` forward samples."""

    n_samples: int = 0

    @classmethod
    def exact(cls) -> Self:
        return cls(n_samples=0)

    @classmethod
    def sampled(cls, n_samples: int) -> Self:
        return cls(n_samples=require_positive_int(n_samples, field_name="n_samples"))

    @property
    def is_exact(self) -> bool:
        return self.n_samples == 0


def mutilate(net: BayesNet, q: Intervention) -> BayesNet:
    """Return the network under do(q).

    Edges into intervened variables are removed and each intervened variable
    gets a degenerate CPT placing all mass on its forced state. All other
    families are unchanged; the empty intervention returns ``net`` itself.
    """
    q.check_against(net.arities)
    if not q:
        return net

    parents = list(net.dag.parents)
    cpts = list(net.cpts)
    for variable, state in q:
        row = np.zeros((1, net.variables[variable].arity))
        row[0, state] = 1.0
        parents[variable] = ()
        cpts[variable] = Cpt(
            child=variable, parents=(), parent_arities=(), probs=row, degenerate=True
        )
    return BayesNet(variables=net.variables, dag=Dag(parents=tuple(parents)), cpts=tuple(cpts))


def check_enumerable(net: BayesNet, budget: int = ENUMERATION_BUDGET) -> None:
    """Raise EnumerationTooLargeError if the joint state space exceeds ``budget``."""
    state_count = net.joint_state_count
    if state_count > budget:
        raise EnumerationTooLargeError(
            f"Joint state space of {state_count} configurations exceeds the "
            f"enumeration budget of {budget}",
            state_count=state_count,
            budget=budget,
        )


def is_enumerable(net: BayesNet, budget: int = ENUMERATION_BUDGET) -> bool:
    return net.joint_state_count <= budget


def _check_states(net: BayesNet, x: np.ndarray) -> None:
    arities = np.asarray(net.arities)
    if np.any(x < 0) or np.any(x >= arities):
        raise ValidationError("Assignment holds a state index outside its variable's range")


def joint_log_prob_batch(net: BayesNet, x: np.ndarray, q: Intervention) -> np.ndarray:
    """Natural-log joint probability of each row of ``x`` under do(q).

    Rows contradicting ``q`` on an intervened variable get ``-inf``.
    """
    x = as_assignment_matrix(x, n_vars=net.n_vars)
    _check_states(net, x)
    mutilated = mutilate(net, q)
    log_prob = np.zeros(x.shape[0])
    with np.errstate(divide="ignore"):
        for cpt in mutilated.cpts:
            rows = cpt.row_index(x[:, list(cpt.parents)])
            log_prob += np.log(cpt.probs[rows, x[:, cpt.child]])
    return log_prob


def joint_log_prob(net: BayesNet, x: Sequence[int] | np.ndarray, q: Intervention) -> float:
    """Natural-log probability of a full assignment ``x`` under do(q)."""
    row = as_assignment(x, n_vars=net.n_vars)
    return float(joint_log_prob_batch(net, row[np.newaxis, :], q)[0])


def _einsum_operands(net: BayesNet) -> list[object]:
    operands: list[object] = []
    for cpt in net.cpts:
        operands.extend([cpt.tensor, [*cpt.parents, cpt.child]])
    return operands


def joint_table(
    net: BayesNet, q: Intervention, *, budget: int = ENUMERATION_BUDGET
) -> np.ndarray:
    """Full joint distribution under do(q) as a tensor with one axis per variable."""
    mutilated = mutilate(net, q)
    check_enumerable(mutilated, budget)
    return np.einsum(*_einsum_operands(mutilated), list(range(net.n_vars)), optimize=True)


def exact_marginal(
    net: BayesNet,
    target_vars: Sequence[int],
    q: Intervention,
    *,
    budget: int = ENUMERATION_BUDGET,
) -> np.ndarray:
    """Exact marginal over ``target_vars`` under do(q), one axis per target variable."""
    targets = [int(t) for t in target_vars]
    if len(set(targets)) != len(targets):
        raise ValidationError("Target variables must be distinct")
    if any(not 0 <= t < net.n_vars for t in targets):
        raise ValidationError(f"Target variables {targets} out of range")
    mutilated = mutilate(net, q)
    check_enumerable(mutilated, budget)
    table = np.einsum(*_einsum_operands(mutilated), targets, optimize=True)
    return np.asarray(table, dtype=np.float64)


def _draw_categorical(probs: np.ndarray, u: np.ndarray) -> np.ndarray:
    cumulative = np.cumsum(probs, axis=1)
    draws = (cumulative <= u[:, np.newaxis]).sum(axis=1)
    return np.minimum(draws, probs.shape[1] - 1)


def forward_sample(
    net: BayesNet, q: Intervention, n: int, rng: np.random.Generator
) -> np.ndarray:
    """Draw ``n`` ancestral samples from the mutilated network.

    Variables are visited in the mutilated graph's topological order (ties by
    index) and one uniform vector is consumed per variable, so the result is
    a deterministic function of the generator state.

    Returns:
        ``(n, n_vars)`` integer array of state indices.
    """
    n = require_positive_int(n, field_name="n")
    mutilated = mutilate(net, q)
    samples = np.zeros((n, net.n_vars), dtype=np.int64)
    for j in mutilated.dag.topological_order():
        cpt = mutilated.cpts[j]
        rows = cpt.row_index(samples[:, list(cpt.parents)])
        samples[:, j] = _draw_categorical(cpt.probs[rows], rng.random(n))
    return samples


def family_marginals(
    net: BayesNet,
    q: Intervention,
    source: MarginalSource,
    rng: np.random.Generator | None = None,
    *,
    budget: int = ENUMERATION_BUDGET,
) -> dict[int, np.ndarray]:
    """Distribution of each non-intervened variable's parent configuration under do(q).

    Returns:
        Mapping from variable index to a vector over that variable's CPT rows.
    """
    mutilated = mutilate(net, q)
    free = [cpt for cpt in mutilated.cpts if not cpt.degenerate]
    if source.is_exact:
        return {
            cpt.child: exact_marginal(mutilated, cpt.parents, Intervention.empty(), budget=budget).reshape(-1)
            for cpt in free
        }
    if rng is None:
        raise ValidationError("A generator is required for sampled marginals")
    samples = forward_sample(mutilated, Intervention.empty(), source.n_samples, rng)
    marginals: dict[int, np.ndarray] = {}
    for cpt in free:
        rows = cpt.row_index(samples[:, list(cpt.parents)])
        marginals[cpt.child] = np.bincount(rows, minlength=cpt.n_rows) / source.n_samples
    return marginals


def family_entropy_per_sample(net: BayesNet, q: Intervention, x: np.ndarray) -> np.ndarray:
    """Per-row sum over free variables of H(X_j | pi_j(x)) under do(q)."""
    x = as_assignment_matrix(x, n_vars=net.n_vars)
    mutilated = mutilate(net, q)
    terms = np.zeros(x.shape[0])
    for cpt in mutilated.cpts:
        if cpt.degenerate:
            continue
        row_entropy = entr(cpt.probs).sum(axis=1)
        terms += row_entropy[cpt.row_index(x[:, list(cpt.parents)])]
    return terms


def model_entropy(
    net: BayesNet,
    q: Intervention,
    marginal_source: MarginalSource | None = None,
    rng: np.random.Generator | None = None,
    *,
    budget: int = ENUMERATION_BUDGET,
) -> float:
    """Entropy of P(X | do(q)) in nats by family decomposition.

    H = sum_j sum_pi P(pi_j | do(q)) H(X_j | pi_j); intervened variables
    contribute nothing.
    """
    source = marginal_source or MarginalSource.exact()
    mutilated = mutilate(net, q)
    if not source.is_exact:
        if rng is None:
            raise ValidationError("A generator is required for sampled entropy")
        samples = forward_sample(mutilated, Intervention.empty(), source.n_samples, rng)
        return float(family_entropy_per_sample(mutilated, Intervention.empty(), samples).mean())

    marginals = family_marginals(mutilated, Intervention.empty(), source, budget=budget)
    total = math.fsum(
        float(marginals[cpt.child] @ entr(cpt.probs).sum(axis=1))
        for cpt in mutilated.cpts
        if not cpt.degenerate
    )
    return total


__all__ = [
    "ENUMERATION_BUDGET",
    "MarginalSource",
    "check_enumerable",
    "exact_marginal",
    "family_entropy_per_sample",
    "family_marginals",
    "forward_sample",
    "is_enumerable",
    "joint_log_prob",
    "joint_log_prob_batch",
    "joint_table",
    "model_entropy",
    "mutilate",
]
