"""Data-acquisition strategies: passive, random interventions, or active queries."""

from __future__ import annotations

from dataclasses import dataclass
from enum import StrEnum
from typing import Self

from activebn.disagreement.estimate import Measure
from activebn.exceptions import ValidationError


class StrategyKind(StrEnum):
    PASSIVE = "passive"
    RANDOM = "random"
    ACTIVE = "active"


@dataclass(frozen=True, slots=True)
class Strategy:
    """How the next record is acquired.

    ``passive`` always observes, ``random`` intervenes on ``size`` uniformly
    chosen variables with uniform states, ``active`` asks the committee for
    the query maximizing ``measure``.
    """

    kind: StrategyKind
    size: int = 0
    measure: Measure | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", StrategyKind(self.kind))
        if self.size < 0:
            raise ValidationError("Random query size must be non-negative")
        if self.kind is StrategyKind.ACTIVE:
            if self.measure is None:
                raise ValidationError("Active strategies need a measure")
            object.__setattr__(self, "measure", Measure(self.measure))
        elif self.measure is not None:
            raise ValidationError(f"{self.kind} strategies take no measure")

    @classmethod
    def passive(cls) -> Self:
        return cls(kind=StrategyKind.PASSIVE)

    @classmethod
    def random(cls, size: int) -> Self:
        return cls(kind=StrategyKind.RANDOM, size=size)

    @classmethod
    def active(cls, measure: Measure | str) -> Self:
        return cls(kind=StrategyKind.ACTIVE, measure=Measure(measure))

    @classmethod
    def parse(cls, text: str) -> Self:
        """Parse ``passive``, ``random:K`` or ``active:{js,bjs,kl2}`` (case-insensitive)."""
        kind, _, argument = text.strip().lower().partition(":")
        try:
            if kind == StrategyKind.PASSIVE and not argument:
                return cls.passive()
            if kind == StrategyKind.RANDOM:
                return cls.random(int(argument))
            if kind == StrategyKind.ACTIVE:
                return cls.active(argument)
        except ValueError:
            pass
        raise ValidationError(
            f"Unknown strategy {text!r}; expected passive, random:K or active:MEASURE"
        )

    @property
    def label(self) -> str:
        if self.kind is StrategyKind.RANDOM:
            return f"random:{self.size}"
        if self.kind is StrategyKind.ACTIVE:
            return f"active:{self.measure}"
        return "passive"

    def __str__(self) -> str:
        return self.label


__all__ = ["Strategy", "StrategyKind"]
