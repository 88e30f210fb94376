"""Step-report tables and cross-trial summaries."""

from __future__ import annotations

import logging
import os
import re
from collections.abc import Mapping, Sequence
from pathlib import Path

import pandas as pd

from activebn.active.loop import StepReport
from activebn.exceptions import DatasetFormatError

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.12g"
SUMMARY_FILE = "summary.csv"
TRIAL_FILE_PATTERN = re.compile(r"^trial_(\d+)\.csv$")

_SUMMARY_EXCLUDED = {"step", "strategy", "query", "query_size", "measure", "score", "score_se"}


def trial_file_name(trial: int) -> str:
    return f"trial_{trial}.csv"


def reports_frame(reports: Sequence[StepReport]) -> pd.DataFrame:
    return pd.DataFrame([r.to_row() for r in reports])


def frame_to_csv(frame: pd.DataFrame) -> str:
    """CSV text with '.' decimals, LF line endings and empty cells for missing values."""
    return frame.to_csv(index=False, lineterminator="\n", float_format=FLOAT_FORMAT, na_rep="")


def write_frame(path: str | os.PathLike[str], frame: pd.DataFrame) -> Path:
    path = Path(path).expanduser()
    path.write_text(frame_to_csv(frame), encoding="utf-8", newline="\n")
    logger.info("Wrote %s", path)
    return path


def metric_columns(frame: pd.DataFrame) -> list[str]:
    return [c for c in frame.columns if c not in _SUMMARY_EXCLUDED]


def summarize(trial_frames: Mapping[int, pd.DataFrame]) -> pd.DataFrame:
    """Final-step metrics per strategy and trial, plus ``mean`` and ``std`` rows.

    ``std`` is the sample standard deviation (ddof=1) across trials.
    """
    finals = []
    for trial in sorted(trial_frames):
        frame = trial_frames[trial]
        last = frame.loc[frame.groupby("strategy", sort=False)["step"].idxmax()]
        finals.append(last.assign(trial=trial))
    if not finals:
        raise DatasetFormatError("No trial reports to summarize")
    combined = pd.concat(finals, ignore_index=True)
    metrics = metric_columns(combined.drop(columns="trial"))

    rows = []
    for strategy in combined["strategy"].drop_duplicates():
        group = combined[combined["strategy"] == strategy]
        values = group[metrics].apply(pd.to_numeric, errors="coerce")
        for trial, (_, row) in zip(group["trial"], values.iterrows(), strict=True):
            rows.append({"strategy": strategy, "stat": f"trial:{trial}", **row.to_dict()})
        rows.append({"strategy": strategy, "stat": "mean", **values.mean().to_dict()})
        rows.append({"strategy": strategy, "stat": "std", **values.std(ddof=1).to_dict()})
    return pd.DataFrame(rows, columns=["strategy", "stat", *metrics])


def read_trial_frames(directory: str | os.PathLike[str]) -> dict[int, pd.DataFrame]:
    """Load every ``trial_<i>.csv`` in ``directory`` keyed by trial index."""
    directory = Path(directory).expanduser()
    frames: dict[int, pd.DataFrame] = {}
    for path in sorted(directory.iterdir()):
        match = TRIAL_FILE_PATTERN.match(path.name)
        if match is None:
            continue
        try:
            frames[int(match.group(1))] = pd.read_csv(path, keep_default_na=True)
        except (pd.errors.ParserError, pd.errors.EmptyDataError) as exc:
            raise DatasetFormatError(f"Cannot read step reports from {path}") from exc
    if not frames:
        raise DatasetFormatError(f"No trial_<i>.csv files in {directory}")
    return frames


__all__ = [
    "SUMMARY_FILE",
    "frame_to_csv",
    "read_trial_frames",
    "reports_frame",
    "summarize",
    "trial_file_name",
    "write_frame",
]
