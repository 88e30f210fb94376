"""Multi-trial, multi-strategy experiments with CSV and manifest output.

Each (trial, strategy) pair is an independent task. All strategies of a
trial start from the same observational sample, and every random stream is
derived from the master seed by label, so outputs do not depend on the
number of worker processes.
"""

from __future__ import annotations

import functools
import json
import logging
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import pandas as pd

from activebn.active.loop import StepReport, initial_data, run_active
from activebn.active.strategy import Strategy
from activebn.data.documents import read_network
from activebn.network._validation import require_positive_int

from .config import MANIFEST_CONFIG_KEY, ExperimentConfig
from .reports import SUMMARY_FILE, reports_frame, summarize, trial_file_name, write_frame
from .seeds import derive_rng

logger = logging.getLogger(__name__)

MANIFEST_FILE = "manifest.json"


@dataclass(frozen=True, slots=True)
class ExperimentResult:
    output_dir: Path
    trial_paths: tuple[Path, ...]
    summary_path: Path
    manifest_path: Path
    summary: pd.DataFrame


def _run_task(config_json: str, trial: int, label: str) -> list[StepReport]:
    cfg = ExperimentConfig.model_validate_json(config_json)
    true_net = read_network(cfg.network)
    streams = functools.partial(derive_rng, cfg.seed, trial)
    initial = initial_data(true_net, cfg.loop.initial_observational, streams("initial"))
    logger.info("Trial %d: running %s", trial, label)
    return run_active(
        true_net,
        Strategy.parse(label),
        cfg.loop,
        streams=streams,
        score_config=cfg.score,
        search_config=cfg.search,
        query_config=cfg.query,
        initial=initial,
    )


def _run_tasks(cfg: ExperimentConfig, tasks: Sequence[tuple[int, str]], jobs: int) -> list[list[StepReport]]:
    config_json = cfg.model_dump_json()
    trials = [trial for trial, _ in tasks]
    labels = [label for _, label in tasks]
    if jobs == 1 or len(tasks) == 1:
        return [_run_task(config_json, trial, label) for trial, label in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_run_task, [config_json] * len(tasks), trials, labels))


def manifest_payload(cfg: ExperimentConfig) -> dict[str, Any]:
    """Everything needed to rerun ``cfg``; ``--config manifest.json`` reads it back."""
    from activebn import __version__

    config = cfg.model_dump(mode="json")
    config["network"] = str(Path(cfg.network).expanduser().resolve())
    return {
        MANIFEST_CONFIG_KEY: config,
        "seeds": {
            "master": cfg.seed,
            "derivation": "SeedSequence(master, spawn_key=blake2b-64(repr(label)) per label)",
            "streams": [
                "(trial, 'initial')",
                "(trial, strategy, step, 'committee' | 'query' | 'oracle')",
                "(trial, strategy, step, 'evaluation' | 'fit')",
                "(trial, strategy, step, 'predictive', size)",
            ],
        },
        "version": __version__,
    }


def run_experiment(cfg: ExperimentConfig, *, jobs: int = 1) -> ExperimentResult:
    """Run every strategy on every trial and write the result files.

    Writes ``trial_<i>.csv`` (all step reports of trial i, strategies in
    config order), ``summary.csv`` and ``manifest.json`` into
    ``cfg.output_dir``.
    """
    jobs = require_positive_int(jobs, field_name="jobs")
    output_dir = Path(cfg.output_dir).expanduser()
    output_dir.mkdir(parents=True, exist_ok=True)

    tasks = [(trial, label) for trial in range(cfg.trials) for label in cfg.strategies]
    results = _run_tasks(cfg, tasks, jobs)

    frames: dict[int, pd.DataFrame] = {}
    trial_paths = []
    for trial in range(cfg.trials):
        reports = [
            report
            for (task_trial, _), task_reports in zip(tasks, results, strict=True)
            if task_trial == trial
            for report in task_reports
        ]
        frames[trial] = reports_frame(reports)
        trial_paths.append(write_frame(output_dir / trial_file_name(trial), frames[trial]))

    summary = summarize(frames)
    summary_path = write_frame(output_dir / SUMMARY_FILE, summary)
    manifest_path = output_dir / MANIFEST_FILE
    manifest_path.write_text(
        json.dumps(manifest_payload(cfg), indent=2) + "\n", encoding="utf-8", newline="\n"
    )
    logger.info("Experiment finished: %d trials x %d strategies", cfg.trials, len(cfg.strategies))
    return ExperimentResult(
        output_dir=output_dir,
        trial_paths=tuple(trial_paths),
        summary_path=summary_path,
        manifest_path=manifest_path,
        summary=summary,
    )


__all__ = ["MANIFEST_FILE", "ExperimentResult", "manifest_payload", "run_experiment"]
