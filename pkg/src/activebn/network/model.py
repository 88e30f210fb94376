"""Immutable building blocks of discrete Bayesian networks.

Every type in this module is frozen after construction and safe to share
across threads. Probability tables are stored as read-only numpy arrays.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from typing import Self

import networkx as nx
import numpy as np

from activebn.exceptions import (
    ArityMismatchError,
    CyclicGraphError,
    InvalidInterventionError,
    RowSumError,
    ValidationError,
)

from ._validation import ROW_SUM_TOLERANCE, frozen_array, require_non_empty_string


@dataclass(frozen=True, slots=True)
class Variable:
    """A discrete variable with named states."""

    name: str
    states: tuple[str, ...]

    def __post_init__(self) -> None:
        require_non_empty_string(self.name, field_name="variable name")
        states = tuple(str(state) for state in self.states)
        object.__setattr__(self, "states", states)
        if len(states) < 2:
            raise ValidationError(
                f"Variable {self.name!r} needs at least 2 states, got {len(states)}"
            )
        if len(set(states)) != len(states):
            raise ValidationError(f"Variable {self.name!r} has duplicate state labels")

    @property
    def arity(self) -> int:
        return len(self.states)

    @classmethod
    def with_arity(cls, name: str, arity: int) -> Self:
        """Create a variable whose states are labelled ``"0" .. "arity-1"``."""
        return cls(name=name, states=tuple(str(i) for i in range(arity)))


@dataclass(frozen=True, slots=True)
class Dag:
    """Directed acyclic graph given as one ordered parent tuple per variable."""

    parents: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        parents = tuple(tuple(int(p) for p in ps) for ps in self.parents)
        object.__setattr__(self, "parents", parents)
        n_vars = len(parents)
        for child, ps in enumerate(parents):
            if len(set(ps)) != len(ps):
                raise ValidationError(f"Variable {child} lists a parent more than once")
            for parent in ps:
                if not 0 <= parent < n_vars:
                    raise ValidationError(
                        f"Parent index {parent} of variable {child} is out of range"
                    )
                if parent == child:
                    raise ValidationError(f"Variable {child} cannot be its own parent")
        graph = self.to_networkx()
        if not nx.is_directed_acyclic_graph(graph):
            cycle = [(u, v) for u, v in nx.find_cycle(graph)]
            raise CyclicGraphError(f"Graph contains a directed cycle: {cycle}", edges=cycle)

    @classmethod
    def empty(cls, n_vars: int) -> Self:
        return cls(parents=tuple(() for _ in range(n_vars)))

    @classmethod
    def from_edges(cls, n_vars: int, edges: Iterable[tuple[int, int]]) -> Self:
        """Build a DAG from (parent, child) pairs; parents keep insertion order."""
        parent_lists: list[list[int]] = [[] for _ in range(n_vars)]
        for parent, child in edges:
            parent_lists[child].append(parent)
        return cls(parents=tuple(tuple(ps) for ps in parent_lists))

    @property
    def n_vars(self) -> int:
        return len(self.parents)

    @property
    def edge_count(self) -> int:
        return sum(len(ps) for ps in self.parents)

    def edges(self) -> list[tuple[int, int]]:
        """All (parent, child) pairs sorted by child then parent."""
        return sorted(((p, c) for c, ps in enumerate(self.parents) for p in ps), key=lambda e: (e[1], e[0]))

    def has_edge(self, parent: int, child: int) -> bool:
        return parent in self.parents[child]

    def to_networkx(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(range(len(self.parents)))
        graph.add_edges_from((p, c) for c, ps in enumerate(self.parents) for p in ps)
        return graph

    def topological_order(self) -> tuple[int, ...]:
        """Topological order; ties go to the smallest variable index."""
        return tuple(nx.lexicographical_topological_sort(self.to_networkx()))

    def with_parents(self, child: int, parents: Sequence[int]) -> Dag:
        updated = list(self.parents)
        updated[child] = tuple(parents)
        return Dag(parents=tuple(updated))

    def canonical(self) -> Dag:
        """The same graph with every parent tuple sorted ascending."""
        return Dag(parents=tuple(tuple(sorted(ps)) for ps in self.parents))


@dataclass(frozen=True, slots=True, eq=False)
class Cpt:
    """Conditional probability table P(child | parents).

    Rows are ordered lexicographically over the parents' states, in the
    parents' declared order (first parent varies slowest). ``degenerate``
    marks the one-row table that mutilation puts on an intervened variable.
    """

    child: int
    parents: tuple[int, ...]
    parent_arities: tuple[int, ...]
    probs: np.ndarray
    degenerate: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "parents", tuple(int(p) for p in self.parents))
        object.__setattr__(
            self, "parent_arities", tuple(int(a) for a in self.parent_arities)
        )
        probs = frozen_array(self.probs)
        object.__setattr__(self, "probs", probs)
        if len(self.parents) != len(self.parent_arities):
            raise ArityMismatchError(
                f"CPT of variable {self.child}: {len(self.parents)} parents but "
                f"{len(self.parent_arities)} parent arities"
            )
        expected_rows = math.prod(self.parent_arities)
        if probs.ndim != 2 or probs.shape[0] != expected_rows or probs.shape[1] < 2:
            raise ArityMismatchError(
                f"CPT of variable {self.child} has shape {probs.shape}, expected "
                f"({expected_rows}, arity)"
            )
        if not np.all(np.isfinite(probs)) or np.any(probs < 0):
            raise RowSumError(f"CPT of variable {self.child} has negative or non-finite entries")
        deviation = np.abs(probs.sum(axis=1) - 1.0)
        if np.any(deviation > ROW_SUM_TOLERANCE):
            bad_row = int(np.argmax(deviation))
            raise RowSumError(
                f"CPT of variable {self.child}: row {bad_row} sums to "
                f"{probs[bad_row].sum()!r}",
                details={"child": self.child, "row": bad_row},
            )

    @property
    def arity(self) -> int:
        return int(self.probs.shape[1])

    @property
    def n_rows(self) -> int:
        return int(self.probs.shape[0])

    @property
    def tensor(self) -> np.ndarray:
        """The table reshaped to ``(*parent_arities, arity)``."""
        return self.probs.reshape(*self.parent_arities, self.arity)

    @property
    def is_strictly_positive(self) -> bool:
        return bool(np.all(self.probs > 0))

    def row_index(self, parent_states: Sequence[int] | np.ndarray) -> int | np.ndarray:
        """Row index of a parent configuration (or an ``(n, |parents|)`` batch)."""
        if not self.parents:
            states = np.asarray(parent_states)
            return 0 if states.ndim <= 1 else np.zeros(states.shape[0], dtype=np.int64)
        states = np.asarray(parent_states, dtype=np.int64)
        return np.ravel_multi_index(tuple(states.T), self.parent_arities)

    def row(self, parent_states: Sequence[int]) -> np.ndarray:
        return self.probs[self.row_index(parent_states)]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Cpt):
            return NotImplemented
        return (
            self.child == other.child
            and self.parents == other.parents
            and self.parent_arities == other.parent_arities
            and self.degenerate == other.degenerate
            and np.array_equal(self.probs, other.probs)
        )

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True, slots=True, eq=False)
class BayesNet:
    """A discrete Bayesian network: variables, structure and one CPT per variable."""

    variables: tuple[Variable, ...]
    dag: Dag
    cpts: tuple[Cpt, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "cpts", tuple(self.cpts))
        n_vars = len(self.variables)
        names = [v.name for v in self.variables]
        if len(set(names)) != n_vars:
            raise ValidationError("Variable names must be unique within a network")
        if self.dag.n_vars != n_vars or len(self.cpts) != n_vars:
            raise ArityMismatchError(
                f"Network has {n_vars} variables, {self.dag.n_vars} graph nodes and "
                f"{len(self.cpts)} CPTs"
            )
        arities = self.arities
        for j, cpt in enumerate(self.cpts):
            if cpt.child != j:
                raise ArityMismatchError(f"CPT at position {j} belongs to variable {cpt.child}")
            if cpt.parents != self.dag.parents[j]:
                raise ArityMismatchError(
                    f"CPT of {names[j]!r} has parents {cpt.parents}, graph says "
                    f"{self.dag.parents[j]}"
                )
            if cpt.arity != arities[j]:
                raise ArityMismatchError(
                    f"CPT of {names[j]!r} has {cpt.arity} columns, variable has "
                    f"{arities[j]} states"
                )
            if cpt.parent_arities != tuple(arities[p] for p in cpt.parents):
                raise ArityMismatchError(f"CPT of {names[j]!r} disagrees with parent arities")

    @property
    def n_vars(self) -> int:
        return len(self.variables)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    @property
    def arities(self) -> tuple[int, ...]:
        return tuple(v.arity for v in self.variables)

    @property
    def joint_state_count(self) -> int:
        return math.prod(self.arities)

    @property
    def clamped(self) -> tuple[int, ...]:
        """Variables carrying a degenerate (intervened) CPT."""
        return tuple(cpt.child for cpt in self.cpts if cpt.degenerate)

    def index_of(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise ValidationError(f"Unknown variable {name!r}") from None

    def same_schema(self, other: BayesNet) -> bool:
        return self.variables == other.variables

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BayesNet):
            return NotImplemented
        return (
            self.variables == other.variables
            and self.dag == other.dag
            and self.cpts == other.cpts
        )

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True, slots=True)
class Intervention:
    """A partial assignment forced by do(q), stored sorted by variable index."""

    assignments: tuple[tuple[int, int], ...] = field(default=())

    def __post_init__(self) -> None:
        pairs = tuple(sorted((int(v), int(s)) for v, s in self.assignments))
        variables = [v for v, _ in pairs]
        if len(set(variables)) != len(variables):
            raise InvalidInterventionError("A variable may appear at most once in an intervention")
        if any(v < 0 or s < 0 for v, s in pairs):
            raise InvalidInterventionError("Intervention indices must be non-negative")
        object.__setattr__(self, "assignments", pairs)

    @classmethod
    def empty(cls) -> Self:
        return cls()

    @classmethod
    def of(cls, assignments: Mapping[int, int] | Iterable[tuple[int, int]]) -> Self:
        pairs = assignments.items() if isinstance(assignments, Mapping) else assignments
        return cls(assignments=tuple(pairs))

    @classmethod
    def parse(cls, text: str, variables: Sequence[Variable]) -> Self:
        """Parse ``"A=1;B=0"`` (state index or state label) against a schema."""
        names = [v.name for v in variables]
        pairs: list[tuple[int, int]] = []
        for chunk in filter(None, (part.strip() for part in text.split(";"))):
            name, sep, state = chunk.partition("=")
            if not sep or name.strip() not in names:
                raise InvalidInterventionError(f"Cannot parse intervention term {chunk!r}")
            index = names.index(name.strip())
            labels = variables[index].states
            state = state.strip()
            if state in labels:
                pairs.append((index, labels.index(state)))
            elif state.isdigit():
                pairs.append((index, int(state)))
            else:
                raise InvalidInterventionError(
                    f"Unknown state {state!r} for variable {name.strip()!r}"
                )
        query = cls(assignments=tuple(pairs))
        query.check_against(tuple(v.arity for v in variables))
        return query

    @property
    def variables(self) -> tuple[int, ...]:
        return tuple(v for v, _ in self.assignments)

    def as_dict(self) -> dict[int, int]:
        return dict(self.assignments)

    def state_of(self, variable: int) -> int | None:
        return self.as_dict().get(variable)

    def extended(self, variable: int, state: int) -> Intervention:
        return Intervention(assignments=(*self.assignments, (variable, state)))

    def check_against(self, arities: Sequence[int]) -> None:
        """Raise InvalidInterventionError unless every term fits ``arities``."""
        for variable, state in self.assignments:
            if variable >= len(arities):
                raise InvalidInterventionError(
                    f"Unknown variable index {variable} (network has {len(arities)})"
                )
            if state >= arities[variable]:
                raise InvalidInterventionError(
                    f"State {state} out of range for variable {variable} "
                    f"with {arities[variable]} states"
                )

    def label(self, names: Sequence[str]) -> str:
        return ";".join(f"{names[v]}={s}" for v, s in self.assignments)

    def __len__(self) -> int:
        return len(self.assignments)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.assignments)

    def __contains__(self, variable: object) -> bool:
        return any(v == variable for v, _ in self.assignments)


__all__ = ["BayesNet", "Cpt", "Dag", "Intervention", "Variable"]
