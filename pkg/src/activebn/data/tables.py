"""CSV codec for datasets.

The header is ``v1,...,vN,do_v1,...,do_vN`` with the declared variable
names; cells hold integer state indices and 0/1 intervention flags.
"""

from __future__ import annotations

import io
import os
from collections.abc import Sequence
from pathlib import Path

import numpy as np
import pandas as pd

from activebn.exceptions import (
    DatasetFormatError,
    MissingFlagColumnError,
    StateOutOfRangeError,
    UnknownColumnError,
)
from activebn.network.model import Variable

from .dataset import Dataset

FLAG_PREFIX = "do_"


def flag_column(name: str) -> str:
    return f"{FLAG_PREFIX}{name}"


def _integer_column(frame: pd.DataFrame, column: str) -> np.ndarray:
    numeric = pd.to_numeric(frame[column], errors="coerce")
    if numeric.isna().any() or not np.all(np.mod(numeric.to_numpy(dtype=np.float64), 1) == 0):
        raise StateOutOfRangeError(f"Column {column!r} must hold integers only")
    return numeric.to_numpy(dtype=np.int64)


def dataset_to_frame(ds: Dataset) -> pd.DataFrame:
    names = list(ds.names)
    values = pd.DataFrame(ds.values, columns=names)
    flags = pd.DataFrame(ds.intervened.astype(np.int64), columns=[flag_column(n) for n in names])
    return pd.concat([values, flags], axis=1)


def serialize_dataset(ds: Dataset) -> str:
    """Serialize a dataset to CSV text with LF line endings and stable row order."""
    return dataset_to_frame(ds).to_csv(index=False, lineterminator="\n")


def parse_dataset(text: str, variables: Sequence[Variable]) -> Dataset:
    """Parse CSV text against a variable schema.

    Raises:
        UnknownColumnError: A column matches neither a variable nor its flag.
        MissingFlagColumnError: A variable has no ``do_<name>`` column.
        StateOutOfRangeError: A state or flag value is outside its range.
        DatasetFormatError: The header is missing or a value column is absent.
    """
    try:
        frame = pd.read_csv(io.StringIO(text), dtype=str, keep_default_na=False)
    except pd.errors.EmptyDataError as exc:
        raise DatasetFormatError("Dataset table has no header row") from exc
    except pd.errors.ParserError as exc:
        raise DatasetFormatError(f"Dataset table could not be parsed: {exc}") from exc

    names = [v.name for v in variables]
    allowed = set(names) | {flag_column(n) for n in names}
    unknown = [c for c in frame.columns if c not in allowed]
    if unknown:
        raise UnknownColumnError(f"Unknown dataset columns: {', '.join(map(str, unknown))}")
    missing_values = [n for n in names if n not in frame.columns]
    if missing_values:
        raise DatasetFormatError(f"Missing value columns: {', '.join(missing_values)}")
    missing_flags = [flag_column(n) for n in names if flag_column(n) not in frame.columns]
    if missing_flags:
        raise MissingFlagColumnError(f"Missing flag columns: {', '.join(missing_flags)}")

    n_rows = len(frame)
    values = np.zeros((n_rows, len(names)), dtype=np.int64)
    flags = np.zeros((n_rows, len(names)), dtype=np.bool_)
    for j, variable in enumerate(variables):
        column = _integer_column(frame, variable.name)
        if np.any(column < 0) or np.any(column >= variable.arity):
            raise StateOutOfRangeError(
                f"Column {variable.name!r} has states outside [0, {variable.arity})"
            )
        flag = _integer_column(frame, flag_column(variable.name))
        if np.any((flag != 0) & (flag != 1)):
            raise StateOutOfRangeError(f"Flag column {flag_column(variable.name)!r} must be 0/1")
        values[:, j] = column
        flags[:, j] = flag.astype(np.bool_)
    return Dataset(variables=tuple(variables), values=values, intervened=flags)


def read_dataset(path: str | os.PathLike[str], variables: Sequence[Variable]) -> Dataset:
    path = Path(path).expanduser()
    try:
        content = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DatasetFormatError(f"Failed to read dataset file: {path}") from exc
    return parse_dataset(content, variables)


def write_dataset(path: str | os.PathLike[str], ds: Dataset) -> Path:
    path = Path(path).expanduser()
    path.write_text(serialize_dataset(ds), encoding="utf-8", newline="\n")
    return path


__all__ = [
    "FLAG_PREFIX",
    "dataset_to_frame",
    "flag_column",
    "parse_dataset",
    "read_dataset",
    "serialize_dataset",
    "write_dataset",
]
