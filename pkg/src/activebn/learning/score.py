"""BDeu family scores and parameter fitting for mixed observational/interventional data.

A record whose intervention flag is set for a variable says nothing about
that variable's mechanism, so it is left out of that family's sufficient
statistics (and only that family's).
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np
from scipy.special import gammaln

from activebn.data.dataset import Dataset
from activebn.exceptions import SchemaMismatchError, ValidationError
from activebn.network.model import BayesNet, Cpt, Dag

from .config import ScoreConfig


def family_counts(ds: Dataset, child: int, parents: Sequence[int]) -> np.ndarray:
    """Counts N[parent_config, child_state] over records not intervened on ``child``."""
    parents = list(parents)
    arities = ds.arities
    r = arities[child]
    parent_arities = [arities[p] for p in parents]
    n_configs = int(np.prod(parent_arities, dtype=np.int64))

    observed = ds.values[~ds.intervened[:, child]]
    if parents:
        rows = np.ravel_multi_index(tuple(observed[:, parents].T), parent_arities)
    else:
        rows = np.zeros(observed.shape[0], dtype=np.int64)
    flat = rows * r + observed[:, child]
    return np.bincount(flat, minlength=n_configs * r).reshape(n_configs, r)


def _bdeu_pseudo_counts(cfg: ScoreConfig, n_configs: int, arity: int) -> tuple[float, float]:
    alpha = cfg.equivalent_sample_size
    return alpha / n_configs, alpha / (n_configs * arity)


def family_log_score(
    ds: Dataset, child: int, parents: Sequence[int], cfg: ScoreConfig
) -> float:
    """Log BDeu marginal likelihood of one family.

    Empty effective data scores 0 (marginal likelihood 1).
    """
    if len(parents) > cfg.max_parents:
        raise ValidationError(
            f"{len(parents)} parents exceed max_parents={cfg.max_parents}"
        )
    counts = family_counts(ds, child, parents)
    n_configs, arity = counts.shape
    alpha_j, alpha_jk = _bdeu_pseudo_counts(cfg, n_configs, arity)
    n_j = counts.sum(axis=1)
    score = np.sum(gammaln(alpha_j) - gammaln(alpha_j + n_j))
    score += np.sum(gammaln(alpha_jk + counts) - gammaln(alpha_jk))
    return float(score)


def structure_score(ds: Dataset, dag: Dag, cfg: ScoreConfig) -> float:
    """Decomposable log score of a whole structure (uniform structure prior)."""
    if dag.n_vars != ds.n_vars:
        raise SchemaMismatchError(f"Graph has {dag.n_vars} nodes, dataset has {ds.n_vars} variables")
    return float(
        sum(family_log_score(ds, j, parents, cfg) for j, parents in enumerate(dag.parents))
    )


def fit_parameters(dag: Dag, ds: Dataset, cfg: ScoreConfig) -> BayesNet:
    """Attach Dirichlet posterior-mean CPTs (BDeu pseudo-counts) to ``dag``.

    Rows are normalized explicitly, so they sum to 1 and stay strictly
    positive for any alpha > 0.
    """
    if dag.n_vars != ds.n_vars:
        raise SchemaMismatchError(f"Graph has {dag.n_vars} nodes, dataset has {ds.n_vars} variables")
    arities = ds.arities
    cpts = []
    for child, parents in enumerate(dag.parents):
        counts = family_counts(ds, child, parents)
        n_configs, arity = counts.shape
        _, alpha_jk = _bdeu_pseudo_counts(cfg, n_configs, arity)
        rows = counts + alpha_jk
        rows = rows / rows.sum(axis=1, keepdims=True)
        cpts.append(
            Cpt(
                child=child,
                parents=parents,
                parent_arities=tuple(arities[p] for p in parents),
                probs=rows,
            )
        )
    return BayesNet(variables=ds.variables, dag=dag, cpts=tuple(cpts))


__all__ = ["family_counts", "family_log_score", "fit_parameters", "structure_score"]
