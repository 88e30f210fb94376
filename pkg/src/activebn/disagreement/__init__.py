"""Disagreement measures over committees and the KL engine behind them."""

from .estimate import DivergenceEstimate, EstimationMethod, Measure, MethodKind
from .factored import (
    FactoredDomain,
    compose_nets,
    product_committee,
    restrict_committee,
    restrict_intervention,
    restrict_net,
)
from .identities import (
    geometric_kl2,
    model_space_bjs,
    model_space_js,
    posterior_entropy_js,
    weight_swapped_kl2,
)
from .kl import kl_between, kl_by_enumeration
from .measures import bjs, committee_posterior, disagreement, js, kl2

__all__ = [
    "DivergenceEstimate",
    "EstimationMethod",
    "FactoredDomain",
    "Measure",
    "MethodKind",
    "bjs",
    "committee_posterior",
    "compose_nets",
    "disagreement",
    "geometric_kl2",
    "js",
    "kl2",
    "kl_between",
    "kl_by_enumeration",
    "model_space_bjs",
    "model_space_js",
    "posterior_entropy_js",
    "product_committee",
    "restrict_committee",
    "restrict_intervention",
    "restrict_net",
    "weight_swapped_kl2",
]
