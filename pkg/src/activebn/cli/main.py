"""``activebn`` command-line entry point.

Exit status is 0 on success, 2 for usage or configuration errors and 1 for
any other failure; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Callable, Sequence
from pathlib import Path

import numpy as np
from pydantic import ValidationError as PydanticValidationError

from activebn.active.loop import CONFIDENCE_THRESHOLDS
from activebn.active.metrics import (
    confident_edges,
    edge_confidence,
    edge_entropy,
    edge_error,
    predictive_accuracy,
)
from activebn.committee import build_committee, load_committee, save_committee
from activebn.data.dataset import Dataset, bootstrap_resample
from activebn.data.documents import read_network, write_network
from activebn.data.tables import read_dataset, write_dataset
from activebn.disagreement.estimate import DivergenceEstimate, EstimationMethod, Measure
from activebn.disagreement.measures import bjs, js, kl2
from activebn.exceptions import ActiveBNError, ConfigError
from activebn.learning.config import ScoreConfig, SearchConfig
from activebn.learning.search import local_search, search_structure
from activebn.network.generate import random_network
from activebn.network.inference import forward_sample
from activebn.network.model import Intervention, Variable
from activebn.query import QueryConfig, greedy_query, score_query

from .config import ExperimentConfig
from .experiment import run_experiment
from .reports import SUMMARY_FILE, frame_to_csv, read_trial_frames, summarize, write_frame
from .results import CommandResult
from .seeds import derive_rng

logger = logging.getLogger("activebn.cli")

Handler = Callable[[argparse.Namespace], CommandResult]


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)


def _method(args: argparse.Namespace) -> EstimationMethod:
    if getattr(args, "exact", False):
        return EstimationMethod.exact()
    if getattr(args, "samples", None):
        return EstimationMethod.sampled(args.samples)
    return EstimationMethod.auto()


def _seed(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"seed must be non-negative, got {value}")
    return value


def _rng(args: argparse.Namespace, *labels: object) -> np.random.Generator:
    return derive_rng(args.seed, args.command, *labels)


def _score_config(args: argparse.Namespace) -> ScoreConfig:
    return ScoreConfig(equivalent_sample_size=args.ess, max_parents=args.max_parents)


def _search_config(args: argparse.Namespace) -> SearchConfig:
    return SearchConfig(restarts=args.restarts)


def _query(text: str | None, variables: Sequence[Variable]) -> Intervention:
    return Intervention.parse(text, variables) if text else Intervention.empty()


def cmd_gen_net(args: argparse.Namespace) -> CommandResult:
    net = random_network(
        args.n_vars,
        args.max_arity,
        args.max_edges if args.max_edges is not None else args.n_vars,
        _rng(args),
        max_parents=args.max_parents,
    )
    path = write_network(args.out, net)
    return CommandResult.with_data(
        f"Wrote network with {net.n_vars} variables and {net.dag.edge_count} edges to {path}",
        net,
        paths=(path,),
    )


def cmd_sample(args: argparse.Namespace) -> CommandResult:
    net = read_network(args.net)
    q = _query(args.query, net.variables)
    ds = Dataset.from_samples(net.variables, forward_sample(net, q, args.n, _rng(args)), q)
    path = write_dataset(args.out, ds)
    return CommandResult.with_data(f"Wrote {len(ds)} records to {path}", ds, paths=(path,))


def cmd_learn(args: argparse.Namespace) -> CommandResult:
    schema = read_network(args.net)
    ds = read_dataset(args.data, schema.variables)
    learned = local_search(ds, _score_config(args), _search_config(args), _rng(args))
    path = write_network(args.out, learned)
    return CommandResult.with_data(
        f"Learned {learned.dag.edge_count} edges from {len(ds)} records; wrote {path}",
        learned,
        paths=(path,),
    )


def cmd_committee(args: argparse.Namespace) -> CommandResult:
    schema = read_network(args.net)
    ds = read_dataset(args.data, schema.variables)
    committee = build_committee(
        ds, args.committee_size, _score_config(args), _search_config(args), _rng(args)
    )
    index = save_committee(committee, args.out)
    edges = ", ".join(str(m.dag.edge_count) for m in committee.members)
    return CommandResult.with_data(
        f"Built {committee.size} members (edges: {edges}); wrote {index}", committee, paths=(index,)
    )


def _format_estimate(name: str, estimate: DivergenceEstimate) -> str:
    return (
        f"{name:<4} {estimate.value:.6g} nats (se {estimate.std_error:.3g}, {estimate.method})"
    )


def cmd_measures(args: argparse.Namespace) -> CommandResult:
    committee = load_committee(args.committee)
    q = _query(args.query, committee.variables)
    method = _method(args)
    estimates = {
        name: func(committee, q, method, _rng(args, name))
        for name, func in (("js", js), ("bjs", bjs), ("kl2", kl2))
    }
    lines = [_format_estimate(name, e) for name, e in estimates.items()]
    return CommandResult.with_data("\n".join(lines), estimates)


def _query_config(args: argparse.Namespace) -> QueryConfig:
    return QueryConfig(measure=Measure(args.measure), budget=args.budget)


def cmd_score_query(args: argparse.Namespace) -> CommandResult:
    committee = load_committee(args.committee)
    q = _query(args.query, committee.variables)
    estimate = score_query(committee, q, _query_config(args), _method(args), _rng(args))
    label = q.label(committee.members[0].names) or "(observational)"
    return CommandResult.with_data(f"{label}: {_format_estimate(args.measure, estimate)}", estimate)


def cmd_propose_query(args: argparse.Namespace) -> CommandResult:
    committee = load_committee(args.committee)
    q, estimate = greedy_query(committee, _query_config(args), _method(args), _rng(args))
    label = q.label(committee.members[0].names) or "(observational)"
    return CommandResult.with_data(
        f"{label}\n{_format_estimate(args.measure, estimate)}", (q, estimate)
    )


def cmd_active(args: argparse.Namespace) -> CommandResult:
    overrides = {
        "network": args.net,
        "strategies": args.strategy,
        "trials": args.trials,
        "seed": args.seed,
        "output_dir": args.out,
        "loop": {
            "steps": args.steps,
            "committee_size": args.committee_size,
            "estimation": args.estimation,
            "n_samples": args.samples,
        },
        "query": {"budget": args.budget},
    }
    cfg = ExperimentConfig.create(config_file=args.config, overrides=overrides)
    result = run_experiment(cfg, jobs=args.jobs)
    return CommandResult.with_data(
        f"Wrote {len(result.trial_paths)} trial files, {result.summary_path} and "
        f"{result.manifest_path}\n{frame_to_csv(result.summary)}",
        result,
        paths=(*result.trial_paths, result.summary_path, result.manifest_path),
    )


def cmd_eval(args: argparse.Namespace) -> CommandResult:
    true_net = read_network(args.net)
    ds = read_dataset(args.data, true_net.variables)
    score_cfg, search_cfg = _score_config(args), _search_config(args)
    streams = _rng(args, "evaluation").spawn(args.bootstrap)
    dags = [search_structure(bootstrap_resample(ds, s), score_cfg, search_cfg, s).dag for s in streams]
    confidence = edge_confidence(dags)
    learned = local_search(ds, score_cfg, search_cfg, _rng(args, "fit"))

    data: dict[str, float | int | None] = {
        "edge_error": edge_error(dags, true_net.dag),
        "edge_entropy": edge_entropy(dags),
    }
    for threshold in CONFIDENCE_THRESHOLDS:
        data[f"edges_p{round(threshold * 100)}"] = len(confident_edges(confidence, threshold))
    for size in args.sizes:
        data[f"pkl{size}"] = (
            predictive_accuracy(
                true_net, learned, size, args.trials, _rng(args, "predictive", size), _method(args)
            )
            if size <= true_net.n_vars
            else None
        )
    lines = [f"{key}: {'n/a' if value is None else f'{value:.6g}'}" for key, value in data.items()]
    return CommandResult.with_data("\n".join(lines), data)


def cmd_report(args: argparse.Namespace) -> CommandResult:
    summary = summarize(read_trial_frames(args.out))
    path = write_frame(Path(args.out) / SUMMARY_FILE, summary)
    return CommandResult.with_data(frame_to_csv(summary).rstrip("\n"), summary, paths=(path,))


def _add_learning_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--ess", type=float, default=1.0, help="BDeu equivalent sample size")
    parser.add_argument("--max-parents", type=int, default=4)
    parser.add_argument("--restarts", type=int, default=3)


def _add_method_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--exact", action="store_true", help="always enumerate")
    group.add_argument("--samples", type=int, help="Monte-Carlo sample count")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="activebn", description="Active learning of discrete Bayesian networks"
    )
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)
    measures = [m.value for m in Measure]

    def add(name: str, handler: Handler, help_text: str, *, seed_required: bool = True) -> argparse.ArgumentParser:
        command = sub.add_parser(name, help=help_text)
        command.set_defaults(handler=handler)
        command.add_argument("--seed", type=_seed, required=seed_required, default=None)
        return command

    gen = add("gen-net", cmd_gen_net, "generate a random sparse network")
    gen.add_argument("--n-vars", type=int, required=True)
    gen.add_argument("--max-arity", type=int, default=3)
    gen.add_argument("--max-edges", type=int)
    gen.add_argument("--max-parents", type=int, default=3)
    gen.add_argument("--out", required=True)

    sample = add("sample", cmd_sample, "forward-sample a network")
    sample.add_argument("--net", required=True)
    sample.add_argument("--n", type=int, default=100)
    sample.add_argument("--query", help="intervention, e.g. 'A=1;B=0'")
    sample.add_argument("--out", required=True)

    learn = add("learn", cmd_learn, "learn a network from data")
    learn.add_argument("--net", required=True, help="network supplying the variable schema")
    learn.add_argument("--data", required=True)
    learn.add_argument("--out", required=True)
    _add_learning_flags(learn)

    committee = add("committee", cmd_committee, "build a bootstrap committee")
    committee.add_argument("--net", required=True, help="network supplying the variable schema")
    committee.add_argument("--data", required=True)
    committee.add_argument("--committee-size", type=int, default=2)
    committee.add_argument("--out", required=True)
    _add_learning_flags(committee)

    meas = add("measures", cmd_measures, "JS, BJS and KL2 of a committee")
    meas.add_argument("--committee", required=True)
    meas.add_argument("--query")
    _add_method_flags(meas)

    for name, handler, help_text in (
        ("score-query", cmd_score_query, "score one query"),
        ("propose-query", cmd_propose_query, "greedy query search"),
    ):
        command = add(name, handler, help_text)
        command.add_argument("--committee", required=True)
        command.add_argument("--measure", choices=measures, default=Measure.KL2.value)
        command.add_argument("--budget", type=int)
        if name == "score-query":
            command.add_argument("--query")
        _add_method_flags(command)

    active = add("active", cmd_active, "run an active-learning experiment", seed_required=False)
    active.add_argument("--config")
    active.add_argument("--net")
    active.add_argument("--strategy", action="append", help="passive, random:K or active:MEASURE")
    active.add_argument("--steps", type=int)
    active.add_argument("--trials", type=int)
    active.add_argument("--committee-size", type=int)
    active.add_argument("--budget", type=int)
    active.add_argument("--estimation", choices=["auto", "exact", "sampled"])
    active.add_argument("--samples", type=int, help="Monte-Carlo sample count per estimate")
    active.add_argument("--out")
    active.add_argument("--jobs", type=int, default=1)

    evaluate = add("eval", cmd_eval, "edge metrics and predictive KL of data against a true network")
    evaluate.add_argument("--net", required=True)
    evaluate.add_argument("--data", required=True)
    evaluate.add_argument("--bootstrap", type=int, default=50)
    evaluate.add_argument("--sizes", type=int, nargs="*", default=[0, 1, 5, 10])
    evaluate.add_argument("--trials", type=int, default=100)
    _add_learning_flags(evaluate)
    _add_method_flags(evaluate)

    report = add("report", cmd_report, "recompute summary.csv from trial files", seed_required=False)
    report.add_argument("--out", required=True)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.verbose)
    try:
        result = args.handler(args)
    except ConfigError as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        return 2
    except PydanticValidationError as exc:
        print(f"error: invalid option: {exc}", file=sys.stderr)
        return 2
    except ActiveBNError as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(result.text)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
