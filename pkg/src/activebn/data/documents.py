"""JSON network documents.

A network document has three top-level keys::

    {
      "variables": [{"name": "A", "states": ["a0", "a1"]}, ...],
      "edges": [["A", "B"], ...],
      "cpts": {"B": [[0.9, 0.1], [0.2, 0.8]], ...}
    }

The parents of a variable are taken in the order their edges appear, and
CPT rows run lexicographically over the parents' states in that order.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

import networkx as nx
import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from pydantic import ValidationError as PydanticValidationError

from activebn.exceptions import (
    ArityMismatchError,
    CyclicGraphError,
    MalformedDocumentError,
    ValidationError,
)
from activebn.network.model import BayesNet, Cpt, Dag, Variable

PROBABILITY_FORMAT = ".17g"


class DocumentModel(BaseModel):
    """Base model for activebn documents; unknown keys are rejected."""

    model_config = ConfigDict(extra="forbid")


class VariableDocument(DocumentModel):
    """A declared variable and its ordered state labels."""

    name: str
    states: list[str]


class NetworkDocument(DocumentModel):
    """Serialized form of a BayesNet."""

    variables: list[VariableDocument]
    edges: list[tuple[str, str]] = Field(default_factory=list)
    cpts: dict[str, list[list[float]]]


class CommitteeDocument(DocumentModel):
    """Index file of a saved committee: member network files plus weights."""

    members: list[str]
    weights: list[float]


def _build_variables(doc: NetworkDocument) -> tuple[Variable, ...]:
    try:
        variables = tuple(Variable(name=v.name, states=tuple(v.states)) for v in doc.variables)
    except ValidationError as exc:
        raise MalformedDocumentError(f"Invalid variable declaration: {exc.message}") from exc
    names = [v.name for v in variables]
    if len(set(names)) != len(names):
        raise MalformedDocumentError("Variable names must be unique")
    return variables


def _build_dag(doc: NetworkDocument, names: list[str]) -> Dag:
    index = {name: i for i, name in enumerate(names)}
    unknown = sorted({n for edge in doc.edges for n in edge if n not in index})
    if unknown:
        raise MalformedDocumentError(f"Edges reference unknown variables: {', '.join(unknown)}")
    if len(set(doc.edges)) != len(doc.edges):
        raise MalformedDocumentError("Edge list contains duplicates")
    if any(parent == child for parent, child in doc.edges):
        raise CyclicGraphError(
            "Edge list contains a self-loop",
            edges=[e for e in doc.edges if e[0] == e[1]],
        )

    graph = nx.DiGraph()
    graph.add_nodes_from(names)
    graph.add_edges_from(doc.edges)
    if not nx.is_directed_acyclic_graph(graph):
        cycle = [(u, v) for u, v in nx.find_cycle(graph)]
        described = ", ".join(f"{u}->{v}" for u, v in cycle)
        raise CyclicGraphError(f"Edges form a directed cycle: {described}", edges=cycle)
    return Dag.from_edges(len(names), ((index[p], index[c]) for p, c in doc.edges))


def network_from_document(doc: NetworkDocument) -> BayesNet:
    """Validate a parsed document and build the network it describes."""
    variables = _build_variables(doc)
    names = [v.name for v in variables]
    dag = _build_dag(doc, names)

    missing = [name for name in names if name not in doc.cpts]
    extra = sorted(set(doc.cpts) - set(names))
    if missing or extra:
        raise MalformedDocumentError(
            f"CPT keys do not match variables (missing: {missing}, unknown: {extra})"
        )

    cpts = []
    for child, variable in enumerate(variables):
        parents = dag.parents[child]
        parent_arities = tuple(variables[p].arity for p in parents)
        rows = doc.cpts[variable.name]
        expected_rows = int(np.prod(parent_arities, dtype=np.int64))
        if len(rows) != expected_rows or any(len(row) != variable.arity for row in rows):
            raise ArityMismatchError(
                f"CPT of {variable.name!r} must have {expected_rows} rows of "
                f"{variable.arity} probabilities",
                details={"variable": variable.name},
            )
        cpts.append(
            Cpt(
                child=child,
                parents=parents,
                parent_arities=parent_arities,
                probs=np.array(rows, dtype=np.float64),
            )
        )
    return BayesNet(variables=variables, dag=dag, cpts=tuple(cpts))


def network_to_document(net: BayesNet) -> NetworkDocument:
    names = net.names
    return NetworkDocument(
        variables=[VariableDocument(name=v.name, states=list(v.states)) for v in net.variables],
        edges=[(names[p], names[c]) for c, ps in enumerate(net.dag.parents) for p in ps],
        cpts={names[cpt.child]: cpt.probs.tolist() for cpt in net.cpts},
    )


def parse_network(text: str) -> BayesNet:
    """Parse a JSON network document, validating every BayesNet invariant."""
    try:
        doc = NetworkDocument.model_validate_json(text)
    except PydanticValidationError as exc:
        raise MalformedDocumentError(f"Network document is malformed: {exc}") from exc
    return network_from_document(doc)


def _format_row(row: list[float]) -> str:
    return "[" + ", ".join(format(p, PROBABILITY_FORMAT) for p in row) + "]"


def _cpts_block(cpts: dict[str, list[list[float]]]) -> str:
    entries = []
    for name, rows in cpts.items():
        body = ",\n".join(f"      {_format_row(row)}" for row in rows)
        entries.append(f"    {json.dumps(name)}: [\n{body}\n    ]")
    return '  "cpts": {\n' + ",\n".join(entries) + "\n  }"


def serialize_network(net: BayesNet) -> str:
    """Serialize a network, one CPT row per line, probabilities to 17 significant digits."""
    payload = network_to_document(net).model_dump(mode="json")
    cpts = payload.pop("cpts")
    head = json.dumps(payload, indent=2)
    return head.removesuffix("\n}") + ",\n" + _cpts_block(cpts) + "\n}\n"


def read_network(path: str | os.PathLike[str]) -> BayesNet:
    path = Path(path).expanduser()
    try:
        content = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise MalformedDocumentError(f"Failed to read network file: {path}") from exc
    return parse_network(content)


def write_network(path: str | os.PathLike[str], net: BayesNet) -> Path:
    path = Path(path).expanduser()
    path.write_text(serialize_network(net), encoding="utf-8", newline="\n")
    return path


__all__ = [
    "CommitteeDocument",
    "NetworkDocument",
    "VariableDocument",
    "network_from_document",
    "network_to_document",
    "parse_network",
    "read_network",
    "serialize_network",
    "write_network",
]
