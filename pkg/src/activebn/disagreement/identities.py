"""Alternative closed forms of the committee measures, evaluated by enumeration.

These rewrite the same quantities through the geometric member average, the
swapped log-term weights, or the committee posterior P(m | x, do(q)). They
are exact and only practical on small networks, where they serve as
independent checks on ``js``, ``bjs`` and ``kl2``.
"""

from __future__ import annotations

import numpy as np
from scipy.special import entr, xlogy

from activebn.committee import Committee
from activebn.exceptions import InfiniteDivergenceError
from activebn.network.inference import ENUMERATION_BUDGET
from activebn.network.model import Intervention

from .measures import member_tables


def _log_tables(tables: np.ndarray, mask: np.ndarray) -> np.ndarray:
    if np.any(tables[:, mask] == 0):
        raise InfiniteDivergenceError("A committee member has zero probability on the support")
    return np.log(tables[:, mask])


def _support(tables: np.ndarray, weights: np.ndarray) -> np.ndarray:
    return (weights @ tables) > 0


def _weighted(c: Committee, q: Intervention, budget: int) -> tuple[np.ndarray, np.ndarray]:
    keep = c.weights > 0
    return member_tables(c, q, budget=budget)[keep], c.weights[keep]


def geometric_kl2(c: Committee, q: Intervention, *, budget: int = ENUMERATION_BUDGET) -> float:
    """<KL(P_m || G)> where ln G = sum_m' P(m') ln P_m' is the unnormalized geometric average."""
    tables, weights = _weighted(c, q, budget)
    mask = _support(tables, weights)
    logs = _log_tables(tables, mask)
    log_geometric = weights @ logs
    return float(weights @ np.sum(tables[:, mask] * (logs - log_geometric), axis=1))


def weight_swapped_kl2(
    c: Committee, q: Intervention, *, budget: int = ENUMERATION_BUDGET
) -> float:
    """<sum_x (P_m(x) - mixture(x)) ln P_m(x)>."""
    tables, weights = _weighted(c, q, budget)
    mask = _support(tables, weights)
    logs = _log_tables(tables, mask)
    mixture = weights @ tables[:, mask]
    return float(weights @ np.sum((tables[:, mask] - mixture) * logs, axis=1))


def _posteriors(c: Committee, q: Intervention, budget: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    tables, weights = _weighted(c, q, budget)
    mixture = weights @ tables
    mask = mixture > 0
    posterior = weights[:, np.newaxis] * tables[:, mask] / mixture[mask]
    return mixture[mask], posterior, weights


def model_space_js(c: Committee, q: Intervention, *, budget: int = ENUMERATION_BUDGET) -> float:
    """Expected KL(P(M | x, do(q)) || P(M)) for x drawn from the mixture."""
    mixture, posterior, weights = _posteriors(c, q, budget)
    per_x = np.sum(xlogy(posterior, posterior) - xlogy(posterior, weights[:, np.newaxis]), axis=0)
    return float(mixture @ per_x)


def model_space_bjs(c: Committee, q: Intervention, *, budget: int = ENUMERATION_BUDGET) -> float:
    """Expected KL(P(M) || P(M | x, do(q))) for x drawn from the mixture."""
    mixture, posterior, weights = _posteriors(c, q, budget)
    if np.any(posterior == 0):
        raise InfiniteDivergenceError("Committee posterior rules out a weighted member")
    per_x = weights @ (np.log(weights)[:, np.newaxis] - np.log(posterior))
    return float(mixture @ per_x)


def posterior_entropy_js(
    c: Committee, q: Intervention, *, budget: int = ENUMERATION_BUDGET
) -> float:
    """H(P(M)) - <H(P(M | x, do(q)))>, the expected reduction in model uncertainty."""
    mixture, posterior, weights = _posteriors(c, q, budget)
    return float(entr(weights).sum() - mixture @ entr(posterior).sum(axis=0))


__all__ = [
    "geometric_kl2",
    "model_space_bjs",
    "model_space_js",
    "posterior_entropy_js",
    "weight_swapped_kl2",
]
