"""Bootstrap committees of learned networks and their on-disk form.

A saved committee is a directory holding ``member_<i>.json`` network
documents and a ``committee.json`` index listing the member files and the
weight vector.
"""

from __future__ import annotations

import json
import logging
import os
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from pydantic import ValidationError as PydanticValidationError

from .data.dataset import Dataset, bootstrap_resample
from .data.documents import CommitteeDocument, read_network, write_network
from .exceptions import EmptyDataError, MalformedDocumentError, SchemaMismatchError, ValidationError
from .learning.config import ScoreConfig, SearchConfig
from .learning.search import local_search
from .network._validation import as_weight_vector, require_positive_int
from .network.model import BayesNet, Variable

logger = logging.getLogger(__name__)

INDEX_FILE = "committee.json"


@dataclass(frozen=True, slots=True, eq=False)
class Committee:
    """A weighted, non-empty set of networks over one variable schema."""

    members: tuple[BayesNet, ...]
    weights: np.ndarray

    def __post_init__(self) -> None:
        members = tuple(self.members)
        if not members:
            raise ValidationError("A committee needs at least one member")
        first = members[0]
        if any(not first.same_schema(m) for m in members[1:]):
            raise SchemaMismatchError("Committee members must share a variable schema")
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "weights", as_weight_vector(self.weights, size=len(members)))

    @classmethod
    def uniform(cls, members: Sequence[BayesNet]) -> Committee:
        k = len(members)
        if k == 0:
            raise ValidationError("A committee needs at least one member")
        return cls(members=tuple(members), weights=np.full(k, 1.0 / k))

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def variables(self) -> tuple[Variable, ...]:
        return self.members[0].variables

    @property
    def n_vars(self) -> int:
        return self.members[0].n_vars

    @property
    def arities(self) -> tuple[int, ...]:
        return self.members[0].arities

    def __len__(self) -> int:
        return len(self.members)


def build_committee(
    ds: Dataset,
    k: int,
    cfg: ScoreConfig,
    scfg: SearchConfig,
    rng: np.random.Generator,
) -> Committee:
    """Learn ``k`` members, each on its own bootstrap resample of ``ds``.

    Member ``i`` draws both its resample and its search restarts from the
    ``i``-th child stream of ``rng``, so members do not depend on each other.
    """
    k = require_positive_int(k, field_name="committee_size")
    if len(ds) == 0:
        raise EmptyDataError("Cannot build a committee from an empty dataset")
    members = []
    for i, stream in enumerate(rng.spawn(k)):
        member = local_search(bootstrap_resample(ds, stream), cfg, scfg, stream)
        logger.debug("Committee member %d has %d edges", i, member.dag.edge_count)
        members.append(member)
    return Committee.uniform(members)


def save_committee(committee: Committee, directory: str | os.PathLike[str]) -> Path:
    directory = Path(directory).expanduser()
    directory.mkdir(parents=True, exist_ok=True)
    files = []
    for i, member in enumerate(committee.members):
        name = f"member_{i}.json"
        write_network(directory / name, member)
        files.append(name)
    doc = CommitteeDocument(members=files, weights=committee.weights.tolist())
    index = directory / INDEX_FILE
    index.write_text(
        json.dumps(doc.model_dump(mode="json"), indent=2) + "\n", encoding="utf-8", newline="\n"
    )
    logger.info("Wrote committee of %d members to %s", committee.size, directory)
    return index


def load_committee(directory: str | os.PathLike[str]) -> Committee:
    directory = Path(directory).expanduser()
    index = directory / INDEX_FILE
    try:
        doc = CommitteeDocument.model_validate_json(index.read_text(encoding="utf-8"))
    except OSError as exc:
        raise MalformedDocumentError(f"Failed to read committee index: {index}") from exc
    except PydanticValidationError as exc:
        raise MalformedDocumentError(f"Committee index is malformed: {exc}") from exc
    members = [read_network(directory / name) for name in doc.members]
    return Committee(members=tuple(members), weights=np.array(doc.weights))


__all__ = ["Committee", "build_committee", "load_committee", "save_committee"]
