"""Internal validation helpers shared across activebn."""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from activebn.exceptions import ShapeError, ValidationError

# Tolerance used for every "sums to one" check on probability vectors.
ROW_SUM_TOLERANCE = 1e-12


def require_non_empty_string(value: str, *, field_name: str) -> str:
    """Require a non-blank string value."""
    if not isinstance(value, str) or not value.strip():
        raise ValidationError(f"{field_name} is required and cannot be empty")
    return value


def require_positive_int(value: int, *, field_name: str, minimum: int = 1) -> int:
    """Require an integer no smaller than ``minimum``."""
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise ValidationError(f"{field_name} must be an integer")
    if value < minimum:
        raise ValidationError(f"{field_name} must be >= {minimum}, got {value}")
    return int(value)


def as_assignment(x: Sequence[int] | np.ndarray, *, n_vars: int) -> np.ndarray:
    """Convert a full assignment to a 1-D integer array of length ``n_vars``."""
    array = np.asarray(x)
    if array.ndim != 1 or array.shape[0] != n_vars:
        raise ShapeError(
            f"Assignment must have exactly {n_vars} entries, got shape {array.shape}"
        )
    return array.astype(np.int64, copy=False)


def as_assignment_matrix(x: np.ndarray, *, n_vars: int) -> np.ndarray:
    """Convert a batch of assignments to an ``(n, n_vars)`` integer array."""
    array = np.asarray(x)
    if array.ndim != 2 or array.shape[1] != n_vars:
        raise ShapeError(
            f"Assignments must have shape (n, {n_vars}), got {array.shape}"
        )
    return array.astype(np.int64, copy=False)


def as_weight_vector(weights: Sequence[float] | np.ndarray, *, size: int) -> np.ndarray:
    """Validate a probability vector of length ``size`` and return a read-only copy."""
    array = np.array(weights, dtype=np.float64)
    if array.ndim != 1 or array.shape[0] != size:
        raise ShapeError(f"Expected {size} weights, got shape {array.shape}")
    if np.any(array < 0) or not np.all(np.isfinite(array)):
        raise ValidationError("Weights must be finite and non-negative")
    if abs(array.sum() - 1.0) > ROW_SUM_TOLERANCE:
        raise ValidationError(f"Weights must sum to 1, got {array.sum()!r}")
    array.setflags(write=False)
    return array


def frozen_array(values: np.ndarray, *, dtype: type = np.float64) -> np.ndarray:
    """Return a read-only copy of ``values``."""
    array = np.array(values, dtype=dtype)
    array.setflags(write=False)
    return array
