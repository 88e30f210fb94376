"""KL divergence between two networks under an intervention.

The family decomposition writes KL(P1 || P2) under do(q) as a sum over the
non-intervened variables j of

    sum P1(x_j, pa1_j, pa2_j | do(q)) * ln[P1(x_j | pa1_j) / P2(x_j | pa2_j)]

so only the joint marginal of each variable with both of its parent sets is
needed, never the full joint table.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import xlogy

from activebn.exceptions import InfiniteDivergenceError, SchemaMismatchError, ValidationError
from activebn.network.inference import (
    ENUMERATION_BUDGET,
    check_enumerable,
    exact_marginal,
    forward_sample,
    joint_log_prob_batch,
    joint_table,
)
from activebn.network.model import BayesNet, Intervention

from .estimate import (
    EXACT_ENUMERATION,
    FAMILY_DECOMPOSITION_EXACT,
    DivergenceEstimate,
    EstimationMethod,
    family_sampled_label,
)


def _check_pair(m1: BayesNet, m2: BayesNet, q: Intervention) -> None:
    if not m1.same_schema(m2):
        raise SchemaMismatchError("KL divergence needs two networks over the same variables")
    q.check_against(m1.arities)


def _infinite(variable: int | None = None) -> InfiniteDivergenceError:
    where = "" if variable is None else f" (variable {variable})"
    return InfiniteDivergenceError(
        f"Second network assigns probability 0 where the first has mass{where}",
        details={} if variable is None else {"variable": variable},
    )


def _family_term(m1: BayesNet, m2: BayesNet, j: int, q: Intervention, budget: int) -> float:
    cpt1, cpt2 = m1.cpts[j], m2.cpts[j]
    scope = sorted({j, *cpt1.parents, *cpt2.parents})
    marginal = exact_marginal(m1, scope, q, budget=budget)
    position = {v: i for i, v in enumerate(scope)}
    states = np.indices(marginal.shape).reshape(len(scope), -1).T
    weights = marginal.reshape(-1)

    own = states[:, position[j]]
    p1 = cpt1.probs[cpt1.row_index(states[:, [position[p] for p in cpt1.parents]]), own]
    p2 = cpt2.probs[cpt2.row_index(states[:, [position[p] for p in cpt2.parents]]), own]

    support = (weights > 0) & (p1 > 0)
    if np.any(p2[support] == 0):
        raise _infinite(j)
    return float(np.sum(weights[support] * (np.log(p1[support]) - np.log(p2[support]))))


def _kl_family_exact(
    m1: BayesNet, m2: BayesNet, q: Intervention, budget: int
) -> DivergenceEstimate:
    check_enumerable(m1, budget)
    terms = [_family_term(m1, m2, j, q, budget) for j in range(m1.n_vars) if j not in q]
    return DivergenceEstimate.exact(math.fsum(terms), FAMILY_DECOMPOSITION_EXACT)


def sampled_log_ratios(
    m1: BayesNet, m2: BayesNet, q: Intervention, n_samples: int, rng: np.random.Generator
) -> np.ndarray:
    """Per-sample ln P1(x|do(q)) - ln P2(x|do(q)) for ``n_samples`` draws from m1."""
    x = forward_sample(m1, q, n_samples, rng)
    lp1 = joint_log_prob_batch(m1, x, q)
    lp2 = joint_log_prob_batch(m2, x, q)
    if np.any(np.isneginf(lp2)):
        raise _infinite()
    return lp1 - lp2


def _kl_family_sampled(
    m1: BayesNet, m2: BayesNet, q: Intervention, n_samples: int, rng: np.random.Generator | None
) -> DivergenceEstimate:
    if rng is None:
        raise ValidationError("A generator is required for sampled divergences")
    # Intervened families contribute ln(1/1) = 0 to every sample.
    ratios = sampled_log_ratios(m1, m2, q, n_samples, rng)
    std_error = float(ratios.std() / math.sqrt(n_samples))
    return DivergenceEstimate.sampled(
        float(ratios.mean()), std_error, family_sampled_label(n_samples)
    )


def kl_between(
    m1: BayesNet,
    m2: BayesNet,
    q: Intervention,
    method: EstimationMethod | None = None,
    rng: np.random.Generator | None = None,
    *,
    budget: int = ENUMERATION_BUDGET,
) -> DivergenceEstimate:
    """KL(P(X | do(q), m1) || P(X | do(q), m2)) in nats by family decomposition.

    Family marginals come from enumeration when the method allows it and
    from forward samples of ``m1`` otherwise.

    Raises:
        InfiniteDivergenceError: ``m2`` gives probability 0 on the support of ``m1``.
        EnumerationTooLargeError: An exact method was asked for beyond ``budget``.
    """
    method = method or EstimationMethod.auto()
    _check_pair(m1, m2, q)
    if m1 is m2 or m1 == m2:
        return DivergenceEstimate.zero(FAMILY_DECOMPOSITION_EXACT)
    if method.use_exact(m1, budget):
        return _kl_family_exact(m1, m2, q, budget)
    return _kl_family_sampled(m1, m2, q, method.n_samples, rng)


def kl_by_enumeration(
    m1: BayesNet, m2: BayesNet, q: Intervention, *, budget: int = ENUMERATION_BUDGET
) -> DivergenceEstimate:
    """Brute-force KL over the full joint tables of both mutilated networks."""
    _check_pair(m1, m2, q)
    p1 = joint_table(m1, q, budget=budget).reshape(-1)
    p2 = joint_table(m2, q, budget=budget).reshape(-1)
    support = p1 > 0
    if np.any(p2[support] == 0):
        raise _infinite()
    value = np.sum(xlogy(p1[support], p1[support]) - xlogy(p1[support], p2[support]))
    return DivergenceEstimate.exact(float(value), EXACT_ENUMERATION)


__all__ = ["kl_between", "kl_by_enumeration", "sampled_log_ratios"]
