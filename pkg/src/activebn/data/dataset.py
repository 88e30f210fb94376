"""Mixed observational/interventional datasets and bootstrap resampling."""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from typing import Self

import numpy as np

from activebn.exceptions import EmptyDataError, ShapeError, ValidationError
from activebn.network._validation import frozen_array
from activebn.network.model import Intervention, Variable


@dataclass(frozen=True, slots=True)
class Record:
    """One complete instantiation plus the variables forced by do(q) when it was acquired."""

    values: tuple[int, ...]
    intervened: tuple[bool, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        object.__setattr__(self, "intervened", tuple(bool(f) for f in self.intervened))
        if len(self.values) != len(self.intervened):
            raise ShapeError(
                f"Record has {len(self.values)} values but {len(self.intervened)} flags"
            )

    @classmethod
    def observed(cls, values: Sequence[int], q: Intervention | None = None) -> Self:
        """Record for ``values`` with flags set exactly on the variables of ``q``."""
        forced = set(q.variables) if q is not None else set()
        return cls(
            values=tuple(values),
            intervened=tuple(i in forced for i in range(len(values))),
        )


@dataclass(frozen=True, slots=True, eq=False)
class Dataset:
    """Ordered records over a fixed schema, stored column-wise as read-only arrays.

    Record order is part of the value: bootstrap resampling indexes into it.
    """

    variables: tuple[Variable, ...]
    values: np.ndarray
    intervened: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "variables", tuple(self.variables))
        n_vars = len(self.variables)
        values = frozen_array(np.asarray(self.values).reshape(-1, n_vars), dtype=np.int64)
        flags = frozen_array(np.asarray(self.intervened).reshape(-1, n_vars), dtype=np.bool_)
        if values.shape != flags.shape:
            raise ShapeError(f"Values {values.shape} and flags {flags.shape} differ in shape")
        arities = np.array([v.arity for v in self.variables], dtype=np.int64)
        if values.size and (np.any(values < 0) or np.any(values >= arities)):
            raise ValidationError("Dataset holds a state index outside its variable's range")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "intervened", flags)

    @classmethod
    def empty(cls, variables: Sequence[Variable]) -> Self:
        n_vars = len(variables)
        return cls(
            variables=tuple(variables),
            values=np.zeros((0, n_vars), dtype=np.int64),
            intervened=np.zeros((0, n_vars), dtype=np.bool_),
        )

    @classmethod
    def from_records(cls, variables: Sequence[Variable], records: Iterable[Record]) -> Self:
        records = list(records)
        if not records:
            return cls.empty(variables)
        if any(len(r.values) != len(variables) for r in records):
            raise ShapeError(f"Every record must have {len(variables)} values")
        return cls(
            variables=tuple(variables),
            values=np.array([r.values for r in records], dtype=np.int64),
            intervened=np.array([r.intervened for r in records], dtype=np.bool_),
        )

    @classmethod
    def from_samples(
        cls, variables: Sequence[Variable], samples: np.ndarray, q: Intervention | None = None
    ) -> Self:
        """Dataset of forward samples, all flagged with the variables of ``q``."""
        samples = np.asarray(samples, dtype=np.int64)
        flags = np.zeros(samples.shape, dtype=np.bool_)
        if q is not None and len(q):
            flags[:, list(q.variables)] = True
        return cls(variables=tuple(variables), values=samples, intervened=flags)

    @property
    def n_vars(self) -> int:
        return len(self.variables)

    @property
    def arities(self) -> tuple[int, ...]:
        return tuple(v.arity for v in self.variables)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    @property
    def records(self) -> tuple[Record, ...]:
        return tuple(self[i] for i in range(len(self)))

    def take(self, indices: Sequence[int] | np.ndarray) -> Dataset:
        index = np.asarray(indices, dtype=np.int64)
        return Dataset(
            variables=self.variables,
            values=self.values[index],
            intervened=self.intervened[index],
        )

    def append(self, record: Record) -> Dataset:
        if len(record.values) != self.n_vars:
            raise ShapeError(f"Record must have {self.n_vars} values")
        return Dataset(
            variables=self.variables,
            values=np.vstack([self.values, np.array([record.values], dtype=np.int64)]),
            intervened=np.vstack([self.intervened, np.array([record.intervened], dtype=np.bool_)]),
        )

    def __len__(self) -> int:
        return int(self.values.shape[0])

    def __getitem__(self, index: int) -> Record:
        return Record(
            values=tuple(int(v) for v in self.values[index]),
            intervened=tuple(bool(f) for f in self.intervened[index]),
        )

    def __iter__(self) -> Iterator[Record]:
        return (self[i] for i in range(len(self)))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            self.variables == other.variables
            and np.array_equal(self.values, other.values)
            and np.array_equal(self.intervened, other.intervened)
        )

    __hash__ = None  # type: ignore[assignment]


def bootstrap_resample(ds: Dataset, rng: np.random.Generator) -> Dataset:
    """Draw ``len(ds)`` records uniformly with replacement; flags travel with their records."""
    if len(ds) == 0:
        raise EmptyDataError("Cannot bootstrap an empty dataset")
    return ds.take(rng.integers(0, len(ds), size=len(ds)))


__all__ = ["Dataset", "Record", "bootstrap_resample"]
