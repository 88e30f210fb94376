"""Datasets, bootstrap resampling and file codecs."""

from .dataset import Dataset, Record, bootstrap_resample
from .documents import (
    NetworkDocument,
    parse_network,
    read_network,
    serialize_network,
    write_network,
)
from .tables import parse_dataset, read_dataset, serialize_dataset, write_dataset

__all__ = [
    "Dataset",
    "NetworkDocument",
    "Record",
    "bootstrap_resample",
    "parse_dataset",
    "parse_network",
    "read_dataset",
    "read_network",
    "serialize_dataset",
    "serialize_network",
    "write_dataset",
    "write_network",
]
