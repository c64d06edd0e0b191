"""Command-line entry point.

Subcommands: gen-data, train-behavior, run, sweep, eval. Every
subcommand reads a JSON config; all randomness flows from config seeds
(optionally overridden with --seed), never from the clock. A run that
ends in "No Solution Found" prints the literal line NSF and exits 0:
declining to answer is a valid result, and pipelines can branch on it.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .bounds import Hoeffding, TTest
from .candidate import CostConfig, SearchConfig
from .classifier import StochasticLinearClassifier, accuracy, fit_softmax
from .data import predicate_from_dict, read_csv, write_csv
from .driver import ElfConfig, run_elf
from .estimation import DIConstraint, true_g_oracle
from .harness import SweepConfig, aggregate, run_sweep, write_aggregate_csv, write_records_csv
from .world import WorldConfig, draw_base_sample, generate_behavior_dataset


class ConfigError(ValueError):
    pass


def _load_config(path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc


def _require(obj: dict, key: str):
    if key not in obj:
        raise ConfigError(f"config is missing required key {key!r}")
    return obj[key]


def _load_model(path) -> StochasticLinearClassifier:
    try:
        with open(path) as fh:
            return StochasticLinearClassifier.from_json(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read model {path}: {exc}") from exc


def _constraint_from_dict(obj: dict) -> DIConstraint:
    bound_spec = _require(obj, "bound")
    method = bound_spec.get("method", "ttest")
    if method == "ttest":
        bound = TTest()
    elif method == "hoeffding":
        bound = Hoeffding(float(_require(bound_spec, "a")),
                          float(_require(bound_spec, "b")))
    else:
        raise ConfigError(f"unknown bound method {method!r}")
    return DIConstraint(
        predicate=predicate_from_dict(_require(obj, "predicate")),
        tau=float(_require(obj, "tau")),
        delta=float(_require(obj, "delta")),
        bound_method=bound,
        metric=obj.get("metric", "impact"),
        name=obj.get("name", ""),
    )


def _search_from_dict(obj: dict) -> SearchConfig:
    return SearchConfig(
        population_size=obj.get("population_size"),
        generations=int(obj.get("generations", 150)),
        initial_step=float(obj.get("initial_step", 0.5)),
        seed=int(obj.get("seed", 0)),
    )


def _cmd_train_behavior(cfg: dict, out: str, seed: int | None) -> int:
    world = WorldConfig.from_dict(_require(cfg, "world"))
    n = int(cfg.get("n_train", 2000))
    rng = np.random.default_rng(world.seed if seed is None else seed)
    X, y, _ = draw_base_sample(world, n, rng)
    beta = fit_softmax(X, y, L=2, steps=int(cfg.get("steps", 2000)),
                       learning_rate=float(cfg.get("learning_rate", 0.1)))
    with open(out, "w") as fh:
        fh.write(beta.to_json())
    print(out)
    return 0


def _cmd_gen_data(cfg: dict, out: str, seed: int | None) -> int:
    world = WorldConfig.from_dict(_require(cfg, "world"))
    beta = _load_model(_require(cfg, "behavior_model"))
    n = int(_require(cfg, "n"))
    dataset = generate_behavior_dataset(world, n, beta, seed=seed)
    write_csv(dataset, out)
    print(out)
    return 0


def _cmd_run(cfg: dict, out: str, seed: int | None) -> int:
    beta = _load_model(_require(cfg, "behavior_model"))
    dataset = read_csv(_require(cfg, "dataset"), L=beta.L,
                       G=int(cfg.get("groups", 2)))
    constraints = tuple(_constraint_from_dict(c)
                        for c in _require(cfg, "constraints"))
    if not constraints:
        raise ConfigError("need at least one constraint")
    cost = CostConfig(constraints, xi=float(cfg.get("xi", 0.01)),
                      lam=float(cfg.get("lambda", 2.0)),
                      loss_kind=cfg.get("loss", "expected01"))
    elf_cfg = ElfConfig(
        constraints=constraints,
        candidate_fraction=float(cfg.get("candidate_fraction", 0.6)),
        cost=cost,
        search=_search_from_dict(cfg.get("search", {})),
        seed=int(cfg.get("seed", 0)) if seed is None else seed,
    )
    outcome = run_elf(dataset, beta, elf_cfg)
    if not outcome.is_solution:
        print("NSF")
        return 0
    model = StochasticLinearClassifier(outcome.theta)
    with open(out, "w") as fh:
        fh.write(model.to_json())
    print(out)
    return 0


def _cmd_sweep(cfg: dict, out: str, seed: int | None, jobs: int | None) -> int:
    sweep_cfg = SweepConfig.from_dict(cfg)
    if seed is not None:
        import dataclasses
        sweep_cfg = dataclasses.replace(sweep_cfg, base_seed=seed)
    os.makedirs(out, exist_ok=True)
    records = run_sweep(sweep_cfg, jobs=jobs)
    records_path = os.path.join(out, "records.csv")
    aggregate_path = os.path.join(out, "aggregate.csv")
    write_records_csv(records, records_path)
    write_aggregate_csv(aggregate(records), aggregate_path)
    errors = [r for r in records if r.error]
    print(records_path)
    print(aggregate_path)
    if errors:
        print(f"warning: {len(errors)} trial(s) errored and were excluded",
              file=sys.stderr)
    return 0


def _cmd_eval(cfg: dict, seed: int | None) -> int:
    model = _load_model(_require(cfg, "model"))
    world = WorldConfig.from_dict(_require(cfg, "world"))
    n = int(cfg.get("population_size", 100_000))
    eval_seed = int(cfg.get("seed", 0)) if seed is None else seed
    behavior = cfg.get("behavior_model")
    beta = _load_model(behavior) if behavior else model
    population = generate_behavior_dataset(world, n, beta, seed=eval_seed)
    constraints = [_constraint_from_dict(c) for c in _require(cfg, "constraints")]
    g_values = [true_g_oracle(model, population, c, world) for c in constraints
                if c.metric == "impact"]
    print(json.dumps({"g": g_values,
                      "accuracy": accuracy(model, population)}))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="longfair",
        description="Train classifiers with high-confidence delayed-impact "
                    "fairness guarantees.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, needs_out in (("gen-data", True), ("train-behavior", True),
                            ("run", True), ("sweep", True), ("eval", False)):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="JSON config path")
        if needs_out:
            p.add_argument("--out", required=True, help="output path")
        p.add_argument("--seed", type=int, default=None,
                       help="override the config seed")
        if name == "sweep":
            p.add_argument("--jobs", type=int, default=None,
                           help="worker processes (default: all cores)")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _load_config(args.config)
        if args.command == "gen-data":
            return _cmd_gen_data(cfg, args.out, args.seed)
        if args.command == "train-behavior":
            return _cmd_train_behavior(cfg, args.out, args.seed)
        if args.command == "run":
            return _cmd_run(cfg, args.out, args.seed)
        if args.command == "sweep":
            return _cmd_sweep(cfg, args.out, args.seed, args.jobs)
        if args.command == "eval":
            return _cmd_eval(cfg, args.seed)
        raise ConfigError(f"unknown command {args.command!r}")
    except (ConfigError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (FloatingPointError, np.linalg.LinAlgError, ArithmeticError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
