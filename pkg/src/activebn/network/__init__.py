"""Discrete Bayesian networks, interventions, enumeration and sampling."""

from .generate import random_dag, random_network, random_parameters
from .inference import (
    ENUMERATION_BUDGET,
    MarginalSource,
    exact_marginal,
    family_marginals,
    forward_sample,
    is_enumerable,
    joint_log_prob,
    joint_log_prob_batch,
    joint_table,
    model_entropy,
    mutilate,
)
from .model import BayesNet, Cpt, Dag, Intervention, Variable

__all__ = [
    "ENUMERATION_BUDGET",
    "BayesNet",
    "Cpt",
    "Dag",
    "Intervention",
    "MarginalSource",
    "Variable",
    "exact_marginal",
    "family_marginals",
    "forward_sample",
    "is_enumerable",
    "joint_log_prob",
    "joint_log_prob_batch",
    "joint_table",
    "model_entropy",
    "mutilate",
    "random_dag",
    "random_network",
    "random_parameters",
]
