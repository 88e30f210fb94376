"""Named random streams derived from a master seed.

A stream is identified by its label path, e.g. ``(trial, "active:kl2", 3,
"committee")``. Labels are hashed into the spawn key of a SeedSequence, so
the stream depends only on the master seed and the path, never on how many
other streams were created before it or in which process.
"""

from __future__ import annotations

import hashlib

import numpy as np


def _label_key(label: object) -> int:
    digest = hashlib.blake2b(repr(label).encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def derive_seed_sequence(master_seed: int, *labels: object) -> np.random.SeedSequence:
    return np.random.SeedSequence(
        entropy=master_seed, spawn_key=tuple(_label_key(label) for label in labels)
    )


def derive_rng(master_seed: int, *labels: object) -> np.random.Generator:
    """Generator for the stream at ``labels`` under ``master_seed``."""
    return np.random.default_rng(derive_seed_sequence(master_seed, *labels))


__all__ = ["derive_rng", "derive_seed_sequence"]
