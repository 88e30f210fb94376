"""Configuration models for scoring and structure search."""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field


class ScoreConfig(BaseModel):
    """BDeu family score settings.

    Attributes:
        equivalent_sample_size: Total Dirichlet pseudo-count alpha per family.
        max_parents: Hard cap on the parent-set size of every variable.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    equivalent_sample_size: float = Field(default=1.0, gt=0)
    max_parents: int = Field(default=4, ge=0)


class SearchConfig(BaseModel):
    """Greedy hill-climbing settings.

    The first restart always starts from the empty graph; the others start
    from random DAGs. Equal-score moves are resolved by the lowest
    (child, parent, move type) index.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    restarts: int = Field(default=3, ge=1)
    max_flips: int = Field(default=1000, ge=0)
    restart_edge_probability: float = Field(default=0.2, ge=0, le=1)
