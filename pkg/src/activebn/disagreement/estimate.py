"""Estimate records and estimation-method selection for divergence computations."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import StrEnum
from typing import Self

from activebn.exceptions import ValidationError
from activebn.network._validation import require_positive_int
from activebn.network.inference import ENUMERATION_BUDGET, is_enumerable
from activebn.network.model import BayesNet

logger = logging.getLogger(__name__)


class Measure(StrEnum):
    """Committee disagreement measures."""

    JS = "js"
    BJS = "bjs"
    KL2 = "kl2"


class MethodKind(StrEnum):
    EXACT = "exact"
    SAMPLED = "sampled"
    AUTO = "auto"


EXACT_ENUMERATION = "exact-enumeration"
FAMILY_DECOMPOSITION_EXACT = "family-decomposition-exact"

# Standard error reported by a sampled estimate whose samples all agree.
MIN_SAMPLED_STD_ERROR = math.ulp(0.0)


def family_sampled_label(n_samples: int) -> str:
    return f"family-decomposition-sampled({n_samples})"


def monte_carlo_label(n_samples: int) -> str:
    return f"monte-carlo({n_samples})"


@dataclass(frozen=True, slots=True)
class EstimationMethod:
    """How a divergence is computed.

    ``exact`` always enumerates (and fails over budget), ``sampled`` always
    draws ``n_samples`` forward samples, ``auto`` enumerates when the joint
    state space fits the budget and samples otherwise.
    """

    kind: MethodKind = MethodKind.AUTO
    n_samples: int = 2000

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", MethodKind(self.kind))
        require_positive_int(self.n_samples, field_name="n_samples")

    @classmethod
    def exact(cls) -> Self:
        return cls(kind=MethodKind.EXACT)

    @classmethod
    def sampled(cls, n_samples: int) -> Self:
        return cls(kind=MethodKind.SAMPLED, n_samples=n_samples)

    @classmethod
    def auto(cls, n_samples: int = 2000) -> Self:
        return cls(kind=MethodKind.AUTO, n_samples=n_samples)

    def use_exact(self, net: BayesNet, budget: int = ENUMERATION_BUDGET) -> bool:
        """Whether this method enumerates ``net``; exact methods let the budget error surface."""
        if self.kind is MethodKind.EXACT:
            return True
        if self.kind is MethodKind.SAMPLED:
            return False
        exact = is_enumerable(net, budget)
        if not exact:
            logger.debug(
                "Joint state space %d exceeds budget %d; sampling with n=%d",
                net.joint_state_count,
                budget,
                self.n_samples,
            )
        return exact


def is_sampled_label(method: str) -> bool:
    """Sampled labels carry their sample count in parentheses."""
    return "(" in method


@dataclass(frozen=True, slots=True)
class DivergenceEstimate:
    """A divergence value in nats with its standard error.

    Attributes:
        value: Non-negative estimate; negative Monte-Carlo noise is clamped to 0.
        std_error: 0 exactly when ``method`` is an exact computation.
        method: Label of the computation that produced the value.
        raw_value: The value before clamping.

    Raises:
        ValidationError: ``std_error`` is negative or non-finite, or it
            disagrees with the kind of ``method``.
    """

    value: float
    std_error: float
    method: str
    raw_value: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.std_error) or self.std_error < 0:
            raise ValidationError(f"std_error must be finite and >= 0, got {self.std_error!r}")
        if is_sampled_label(self.method) and self.std_error == 0:
            raise ValidationError(f"Sampled estimate {self.method} needs a positive std_error")
        if not is_sampled_label(self.method) and self.std_error != 0:
            raise ValidationError(f"Exact estimate {self.method} must have std_error 0")

    @classmethod
    def exact(cls, value: float, method: str) -> Self:
        raw = float(value)
        return cls(value=max(raw, 0.0), std_error=0.0, method=method, raw_value=raw)

    @classmethod
    def sampled(cls, value: float, std_error: float, method: str) -> Self:
        """A Monte-Carlo estimate; zero sample variance is reported as the smallest positive error."""
        raw = float(value)
        if raw < 0:
            logger.warning("Clamped negative %s estimate %.3g to 0", method, raw)
        std_error = float(std_error)
        if std_error == 0:
            std_error = MIN_SAMPLED_STD_ERROR
        return cls(value=max(raw, 0.0), std_error=std_error, method=method, raw_value=raw)

    @classmethod
    def zero(cls, method: str) -> Self:
        return cls(value=0.0, std_error=0.0, method=method, raw_value=0.0)

    @property
    def is_exact(self) -> bool:
        return not is_sampled_label(self.method)

    @property
    def was_clamped(self) -> bool:
        return self.raw_value < 0


__all__ = [
    "DivergenceEstimate",
    "EstimationMethod",
    "Measure",
    "MethodKind",
    "EXACT_ENUMERATION",
    "FAMILY_DECOMPOSITION_EXACT",
    "MIN_SAMPLED_STD_ERROR",
    "family_sampled_label",
    "is_sampled_label",
    "monte_carlo_label",
]
