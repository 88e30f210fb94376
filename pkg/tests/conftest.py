"""Shared pytest fixtures for activebn tests."""

from __future__ import annotations

import string
from collections.abc import Sequence

import numpy as np
import pytest

from activebn.committee import Committee
from activebn.data.dataset import Dataset
from activebn.network import BayesNet, Cpt, Dag, Intervention, Variable, forward_sample


def build_net(
    arities: Sequence[int],
    parents: Sequence[Sequence[int]],
    tables: Sequence[Sequence[Sequence[float]]],
    names: Sequence[str] | None = None,
) -> BayesNet:
    """Network from per-variable parent lists and CPT rows; names default to A, B, C..."""
    names = list(names or string.ascii_uppercase[: len(arities)])
    variables = tuple(Variable.with_arity(name, arity) for name, arity in zip(names, arities, strict=True))
    dag = Dag(parents=tuple(tuple(ps) for ps in parents))
    cpts = tuple(
        Cpt(
            child=j,
            parents=tuple(parents[j]),
            parent_arities=tuple(arities[p] for p in parents[j]),
            probs=np.array(tables[j], dtype=np.float64),
        )
        for j in range(len(arities))
    )
    return BayesNet(variables=variables, dag=dag, cpts=cpts)


@pytest.fixture(scope="session")
def make_net():
    """Factory fixture building a network from arities, parent lists and CPT rows."""
    return build_net


@pytest.fixture(scope="session")
def fair_coin():
    return build_net([2], [[]], [[[0.5, 0.5]]])


@pytest.fixture(scope="session")
def biased_coin():
    return build_net([2], [[]], [[[0.25, 0.75]]])


@pytest.fixture(scope="session")
def coin_committee(fair_coin, biased_coin):
    """The binary pair (0.5, 0.5) vs (0.25, 0.75) with uniform weights."""
    return Committee.uniform([fair_coin, biased_coin])


@pytest.fixture(scope="session")
def chain():
    """A -> B over binary variables."""
    return build_net(
        [2, 2],
        [[], [0]],
        [[[0.6, 0.4]], [[0.9, 0.1], [0.2, 0.8]]],
    )


@pytest.fixture(scope="session")
def chain3():
    """A -> B -> C with a ternary middle variable."""
    return build_net(
        [2, 3, 2],
        [[], [0], [1]],
        [
            [[0.3, 0.7]],
            [[0.7, 0.2, 0.1], [0.1, 0.3, 0.6]],
            [[0.9, 0.1], [0.5, 0.5], [0.15, 0.85]],
        ],
    )


@pytest.fixture(scope="session")
def collider():
    """A -> C <- B."""
    return build_net(
        [2, 2, 2],
        [[], [], [0, 1]],
        [
            [[0.5, 0.5]],
            [[0.4, 0.6]],
            [[0.95, 0.05], [0.3, 0.7], [0.25, 0.75], [0.05, 0.95]],
        ],
    )


@pytest.fixture(scope="session")
def chain_committee(chain, make_net):
    """Two members over {A, B} that disagree about the edge and its strength."""
    reversed_chain = make_net(
        [2, 2],
        [[1], []],
        [[[0.7, 0.3], [0.35, 0.65]], [[0.5, 0.5]]],
    )
    return Committee.uniform([chain, reversed_chain])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def chain3_data(chain3):
    samples = forward_sample(chain3, Intervention.empty(), 400, np.random.default_rng(7))
    return Dataset.from_samples(chain3.variables, samples)
