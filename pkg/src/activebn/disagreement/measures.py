"""Committee disagreement measures under an intervention.

* ``js``: entropy of the weighted mixture minus the weighted member entropies.
* ``bjs``: weighted KL from the mixture to each member.
* ``kl2``: weighted KL over ordered member pairs; always ``js + bjs``.

Every measure is a pure function of (committee, q, generator state).
Intervened variables are deterministic under do(q) and contribute nothing.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence

import numpy as np
from scipy.special import entr, logsumexp

from activebn.committee import Committee
from activebn.exceptions import InfiniteDivergenceError, UndefinedPosteriorError, ValidationError
from activebn.network._validation import as_assignment
from activebn.network.inference import (
    ENUMERATION_BUDGET,
    family_entropy_per_sample,
    forward_sample,
    joint_log_prob_batch,
    joint_table,
)
from activebn.network.model import Intervention

from .estimate import (
    EXACT_ENUMERATION,
    FAMILY_DECOMPOSITION_EXACT,
    DivergenceEstimate,
    EstimationMethod,
    Measure,
    monte_carlo_label,
)
from .kl import kl_between

logger = logging.getLogger(__name__)


def member_tables(c: Committee, q: Intervention, *, budget: int = ENUMERATION_BUDGET) -> np.ndarray:
    """Flattened joint tables under do(q), one row per member."""
    return np.stack([joint_table(m, q, budget=budget).reshape(-1) for m in c.members])


def _require_rng(rng: np.random.Generator | None) -> np.random.Generator:
    if rng is None:
        raise ValidationError("A generator is required for sampled divergences")
    return rng


def _sample_mixture(
    c: Committee, q: Intervention, n_samples: int, rng: np.random.Generator
) -> np.ndarray:
    counts = rng.multinomial(n_samples, c.weights)
    parts = [
        forward_sample(member, q, int(count), rng)
        for member, count in zip(c.members, counts, strict=True)
        if count > 0
    ]
    return np.concatenate(parts, axis=0)


def _log_probs(c: Committee, x: np.ndarray, q: Intervention) -> np.ndarray:
    return np.stack([joint_log_prob_batch(m, x, q) for m in c.members])


def _active(c: Committee) -> list[int]:
    return [i for i, w in enumerate(c.weights) if w > 0]


def _check_finite(log_probs: np.ndarray, members: Sequence[int]) -> None:
    if np.any(np.isneginf(log_probs[list(members)])):
        raise InfiniteDivergenceError(
            "A weighted committee member assigns probability 0 to a sampled configuration"
        )


def js(
    c: Committee,
    q: Intervention,
    method: EstimationMethod | None = None,
    rng: np.random.Generator | None = None,
    *,
    budget: int = ENUMERATION_BUDGET,
) -> DivergenceEstimate:
    """Jensen-Shannon disagreement: H(mixture) - <H(member)>."""
    method = method or EstimationMethod.auto()
    q.check_against(c.arities)
    if c.size == 1:
        return DivergenceEstimate.zero(EXACT_ENUMERATION)

    if method.use_exact(c.members[0], budget):
        tables = member_tables(c, q, budget=budget)
        mixture = c.weights @ tables
        value = entr(mixture).sum() - c.weights @ entr(tables).sum(axis=1)
        return DivergenceEstimate.exact(float(value), EXACT_ENUMERATION)

    rng = _require_rng(rng)
    n = method.n_samples
    x = _sample_mixture(c, q, n, rng)
    mixture_terms = -logsumexp(_log_probs(c, x, q), axis=0, b=c.weights[:, np.newaxis])
    variance = mixture_terms.var() / n
    member_entropy = 0.0
    for i in _active(c):
        member = c.members[i]
        terms = family_entropy_per_sample(member, q, forward_sample(member, q, n, rng))
        member_entropy += c.weights[i] * terms.mean()
        variance += c.weights[i] ** 2 * terms.var() / n
    value = mixture_terms.mean() - member_entropy
    return DivergenceEstimate.sampled(float(value), math.sqrt(variance), monte_carlo_label(n))


def bjs(
    c: Committee,
    q: Intervention,
    method: EstimationMethod | None = None,
    rng: np.random.Generator | None = None,
    *,
    budget: int = ENUMERATION_BUDGET,
) -> DivergenceEstimate:
    """Swapped Jensen-Shannon disagreement: <KL(mixture || member)>."""
    method = method or EstimationMethod.auto()
    q.check_against(c.arities)
    if c.size == 1:
        return DivergenceEstimate.zero(EXACT_ENUMERATION)

    if method.use_exact(c.members[0], budget):
        tables = member_tables(c, q, budget=budget)
        mixture = c.weights @ tables
        support = mixture > 0
        total = 0.0
        for i in _active(c):
            member = tables[i, support]
            if np.any(member == 0):
                raise InfiniteDivergenceError(
                    f"Committee member {i} assigns probability 0 inside the mixture's support"
                )
            total += c.weights[i] * np.sum(mixture[support] * np.log(mixture[support] / member))
        return DivergenceEstimate.exact(float(total), EXACT_ENUMERATION)

    rng = _require_rng(rng)
    n = method.n_samples
    x = _sample_mixture(c, q, n, rng)
    log_probs = _log_probs(c, x, q)
    active = _active(c)
    _check_finite(log_probs, active)
    log_mixture = logsumexp(log_probs, axis=0, b=c.weights[:, np.newaxis])
    terms = log_mixture - c.weights[active] @ log_probs[active]
    return DivergenceEstimate.sampled(
        float(terms.mean()), float(terms.std() / math.sqrt(n)), monte_carlo_label(n)
    )


def kl2(
    c: Committee,
    q: Intervention,
    method: EstimationMethod | None = None,
    rng: np.random.Generator | None = None,
    *,
    budget: int = ENUMERATION_BUDGET,
) -> DivergenceEstimate:
    """Weighted KL over ordered member pairs, sum_{m,m'} P(m)P(m') KL(m || m')."""
    method = method or EstimationMethod.auto()
    q.check_against(c.arities)
    if c.size == 1:
        return DivergenceEstimate.zero(FAMILY_DECOMPOSITION_EXACT)
    active = _active(c)

    if method.use_exact(c.members[0], budget):
        terms = [
            c.weights[i]
            * c.weights[k]
            * kl_between(c.members[i], c.members[k], q, EstimationMethod.exact(), budget=budget).value
            for i in active
            for k in active
            if i != k
        ]
        return DivergenceEstimate.exact(math.fsum(terms), FAMILY_DECOMPOSITION_EXACT)

    rng = _require_rng(rng)
    n = method.n_samples
    value = 0.0
    variance = 0.0
    # One sample set per member serves all of its ordered pairs.
    for i in active:
        x = forward_sample(c.members[i], q, n, rng)
        log_probs = _log_probs(c, x, q)
        _check_finite(log_probs, active)
        g = c.weights[active] @ (log_probs[i] - log_probs[active])
        value += c.weights[i] * g.mean()
        variance += c.weights[i] ** 2 * g.var() / n
    return DivergenceEstimate.sampled(value, math.sqrt(variance), monte_carlo_label(n))


_MEASURES = {Measure.JS: js, Measure.BJS: bjs, Measure.KL2: kl2}


def disagreement(
    measure: Measure | str,
    c: Committee,
    q: Intervention,
    method: EstimationMethod | None = None,
    rng: np.random.Generator | None = None,
    *,
    budget: int = ENUMERATION_BUDGET,
) -> DivergenceEstimate:
    """Evaluate the named measure."""
    try:
        func = _MEASURES[Measure(measure)]
    except ValueError:
        raise ValidationError(f"Unknown measure {measure!r}") from None
    return func(c, q, method, rng, budget=budget)


def committee_posterior(
    c: Committee, x: Sequence[int] | np.ndarray, q: Intervention
) -> np.ndarray:
    """P(m | x, do(q)) proportional to P(m) P(x | do(q), m) over the committee.

    Raises:
        UndefinedPosteriorError: No weighted member gives ``x`` positive probability.
    """
    row = as_assignment(x, n_vars=c.n_vars)
    log_probs = _log_probs(c, row[np.newaxis, :], q)[:, 0]
    with np.errstate(divide="ignore"):
        log_joint = log_probs + np.log(c.weights)
    if np.all(np.isneginf(log_joint)):
        raise UndefinedPosteriorError(
            "Every committee member assigns the observation probability 0"
        )
    return np.exp(log_joint - logsumexp(log_joint))


__all__ = [
    "bjs",
    "committee_posterior",
    "disagreement",
    "js",
    "kl2",
    "member_tables",
]
