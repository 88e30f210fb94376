"""Domains split into independent blocks of variables.

When every committee member factorizes across the blocks, KL2 over the whole
domain is the sum of the block values while JS is only subadditive. The
helpers here cut networks, committees and interventions down to one block
and assemble full-domain networks from block networks.
"""

from __future__ import annotations

import itertools
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Self

import numpy as np

from activebn.committee import Committee
from activebn.exceptions import SchemaMismatchError, ValidationError
from activebn.network.model import BayesNet, Cpt, Dag, Intervention, Variable


@dataclass(frozen=True, slots=True)
class FactoredDomain:
    """A partition of variables ``0..n-1`` into disjoint blocks."""

    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        blocks = tuple(tuple(sorted(int(v) for v in block)) for block in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        if any(not block for block in blocks):
            raise ValidationError("Blocks must be non-empty")
        flat = sorted(v for block in blocks for v in block)
        if flat != list(range(len(flat))):
            raise ValidationError("Blocks must be disjoint and cover variables 0..n-1")

    @classmethod
    def of(cls, *blocks: Sequence[int]) -> Self:
        return cls(blocks=tuple(tuple(b) for b in blocks))

    @property
    def n_vars(self) -> int:
        return sum(len(block) for block in self.blocks)

    def block_of(self, variable: int) -> int:
        for i, block in enumerate(self.blocks):
            if variable in block:
                return i
        raise ValidationError(f"Variable {variable} is outside the domain")

    def is_factorized(self, net: BayesNet) -> bool:
        """Whether no edge of ``net`` crosses a block boundary."""
        return all(
            self.block_of(parent) == self.block_of(child) for parent, child in net.dag.edges()
        )


def restrict_net(net: BayesNet, block: Sequence[int]) -> BayesNet:
    """The sub-network over ``block``; the block must be closed under parents."""
    block = sorted(int(v) for v in block)
    local = {v: i for i, v in enumerate(block)}
    cpts = []
    for v in block:
        cpt = net.cpts[v]
        if any(p not in local for p in cpt.parents):
            raise SchemaMismatchError(f"Variable {v} has a parent outside the block")
        cpts.append(
            Cpt(
                child=local[v],
                parents=tuple(local[p] for p in cpt.parents),
                parent_arities=cpt.parent_arities,
                probs=cpt.probs,
            )
        )
    dag = Dag(parents=tuple(cpt.parents for cpt in cpts))
    return BayesNet(variables=tuple(net.variables[v] for v in block), dag=dag, cpts=tuple(cpts))


def restrict_committee(c: Committee, block: Sequence[int]) -> Committee:
    return Committee(
        members=tuple(restrict_net(m, block) for m in c.members), weights=c.weights
    )


def restrict_intervention(q: Intervention, block: Sequence[int]) -> Intervention:
    local = {v: i for i, v in enumerate(sorted(int(v) for v in block))}
    return Intervention.of((local[v], s) for v, s in q if v in local)


def compose_nets(domain: FactoredDomain, parts: Sequence[BayesNet]) -> BayesNet:
    """Place block networks side by side; ``parts[i]`` covers ``domain.blocks[i]``."""
    if len(parts) != len(domain.blocks):
        raise ValidationError(f"Expected {len(domain.blocks)} block networks, got {len(parts)}")
    variables: dict[int, Variable] = {}
    cpts: dict[int, Cpt] = {}
    for block, part in zip(domain.blocks, parts, strict=True):
        if part.n_vars != len(block):
            raise SchemaMismatchError(
                f"Block of {len(block)} variables got a network over {part.n_vars}"
            )
        for j, cpt in enumerate(part.cpts):
            v = block[j]
            variables[v] = part.variables[j]
            cpts[v] = Cpt(
                child=v,
                parents=tuple(block[p] for p in cpt.parents),
                parent_arities=cpt.parent_arities,
                probs=cpt.probs,
            )
    order = range(domain.n_vars)
    dag = Dag(parents=tuple(cpts[v].parents for v in order))
    return BayesNet(
        variables=tuple(variables[v] for v in order), dag=dag, cpts=tuple(cpts[v] for v in order)
    )


def product_committee(domain: FactoredDomain, committees: Sequence[Committee]) -> Committee:
    """Every combination of block members, weighted by the product of block weights."""
    if len(committees) != len(domain.blocks):
        raise ValidationError(f"Expected {len(domain.blocks)} block committees")
    members = []
    weights = []
    for combo in itertools.product(*(range(c.size) for c in committees)):
        members.append(
            compose_nets(domain, [c.members[i] for c, i in zip(committees, combo, strict=True)])
        )
        weights.append(
            float(np.prod([c.weights[i] for c, i in zip(committees, combo, strict=True)]))
        )
    total = sum(weights)
    return Committee(members=tuple(members), weights=np.array(weights) / total)


__all__ = [
    "FactoredDomain",
    "compose_nets",
    "product_committee",
    "restrict_committee",
    "restrict_intervention",
    "restrict_net",
]
