"""Custom exceptions for activebn.

This module defines a hierarchy of exceptions for activebn that allow users
to handle specific error conditions while preserving original tracebacks via
exception chaining.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from typing import Any


class ActiveBNError(Exception):
    """Base exception for all activebn errors.

    All activebn exceptions inherit from this class, allowing users to catch
    any library-specific error with a single except clause.

    Attributes:
        message: Human-readable error message
        details: Structured context about the failure (may be empty)

    Example:
        >>> try:
        ...     exact_marginal(net, [0], Intervention.empty())
        ... except ActiveBNError as e:
        ...     print(f"activebn error: {e}")
    """

    def __init__(
        self,
        message: str,
        *,
        details: Mapping[str, Any] | None = None,
    ) -> None:
        super().__init__(message)
        self.message = message
        self.details = dict(details or {})


class ValidationError(ActiveBNError):
    """Raised when an argument to a public operation is invalid."""


class InvalidInterventionError(ValidationError):
    """Raised for unknown variables, out-of-range states or repeated variables in do(q)."""


class ShapeError(ValidationError):
    """Raised when an assignment or array does not match the network dimensions."""


class SchemaMismatchError(ValidationError):
    """Raised when networks, datasets or structures are over different variable schemas."""


class NetworkFormatError(ActiveBNError):
    """Base error for network documents that cannot be turned into a BayesNet."""


class MalformedDocumentError(NetworkFormatError):
    """Raised when a network document is not valid JSON or violates the document schema."""


class CyclicGraphError(NetworkFormatError):
    """Raised when the edges of a network form a directed cycle.

    Attributes:
        edges: The edges (parent, child) taking part in the cycle.

    Example:
        >>> try:
        ...     parse_network(text)
        ... except CyclicGraphError as e:
        ...     print(f"cycle through {e.edges}")
    """

    def __init__(
        self,
        message: str,
        *,
        edges: Iterable[tuple[Any, Any]] = (),
        details: Mapping[str, Any] | None = None,
    ) -> None:
        super().__init__(message, details=details)
        self.edges = list(edges)


class RowSumError(NetworkFormatError):
    """Raised when a CPT row is negative somewhere or does not sum to 1."""


class ArityMismatchError(NetworkFormatError):
    """Raised when a CPT's shape is inconsistent with the arities of its family."""


class DatasetFormatError(ActiveBNError):
    """Base error for dataset tables that cannot be turned into a Dataset."""


class UnknownColumnError(DatasetFormatError):
    """Raised when a dataset table has a column that matches no variable."""


class MissingFlagColumnError(DatasetFormatError):
    """Raised when a variable's ``do_<name>`` flag column is absent."""


class StateOutOfRangeError(DatasetFormatError):
    """Raised when a dataset cell or flag holds a value outside its allowed range."""


class EmptyDataError(ActiveBNError):
    """Raised when an operation needs at least one record and got none."""


class EnumerationTooLargeError(ActiveBNError):
    """Raised when exact enumeration would exceed the configured joint-state budget.

    Callers are expected to fall back to a sampled estimate.

    Attributes:
        state_count: Number of joint states the enumeration would visit.
        budget: The enumeration budget in force.
    """

    def __init__(self, message: str, *, state_count: int, budget: int) -> None:
        super().__init__(
            message, details={"state_count": state_count, "budget": budget}
        )
        self.state_count = state_count
        self.budget = budget


class InfiniteDivergenceError(ActiveBNError):
    """Raised when a KL divergence is infinite.

    This happens when the second distribution assigns probability 0 to a
    configuration the first one can produce. It is distinct from numeric
    overflow.
    """


class UndefinedPosteriorError(ActiveBNError):
    """Raised when every committee member gives an observation probability 0."""


class ConfigError(ActiveBNError):
    """Raised when an experiment configuration is missing or invalid."""


__all__ = [
    "ActiveBNError",
    "ArityMismatchError",
    "ConfigError",
    "CyclicGraphError",
    "DatasetFormatError",
    "EmptyDataError",
    "EnumerationTooLargeError",
    "InfiniteDivergenceError",
    "InvalidInterventionError",
    "MalformedDocumentError",
    "MissingFlagColumnError",
    "NetworkFormatError",
    "RowSumError",
    "SchemaMismatchError",
    "ShapeError",
    "StateOutOfRangeError",
    "UndefinedPosteriorError",
    "UnknownColumnError",
    "ValidationError",
]
