"""Sweep harness: repeated trials over (alpha, n) cells of the synthetic
world, measuring failure rate, probability of returning a solution, and
accuracy against the analytic ground truth.

A trial's failure per constraint is judged with the closed-form impact
expectation on a large fresh population, not by re-drawing noisy
impacts, so "failure" has no Monte-Carlo ambiguity.
"""

from __future__ import annotations

import csv
import dataclasses
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .bounds import TTest
from .candidate import CostConfig, SearchConfig
from .classifier import StochasticLinearClassifier, accuracy, fit_softmax
from .data import Always, Dataset, GroupEquals
from .driver import ElfConfig, run_elf
from .estimation import ACCURACY, DIConstraint, true_g_oracle
from .world import (WorldConfig, compute_tolerances, draw_base_sample,
                    generate_behavior_dataset)

RECORD_HEADER = ("alpha,n,trial,returned,fail_g0,fail_g1,fail_acc,"
                 "accuracy,u0,u1")
AGGREGATE_HEADER = ("alpha,n,trials,failrate_g0,se_g0,failrate_g1,se_g1,"
                    "solution_rate,se_sol,mean_acc,se_acc")


@dataclass(frozen=True)
class SweepConfig:
    alphas: tuple[float, ...] = (0.0, 0.5, 0.9)
    ns: tuple[int, ...] = (128, 256, 512, 1024, 2048, 4096, 8192, 16384)
    trials: int = 100
    delta_di: float = 0.1
    delta_acc: float = 0.1
    accuracy_floor: float = 0.75
    eval_population_size: int = 100_000
    base_seed: int = 0
    # harness knobs beyond the metrics themselves
    candidate_fraction: float = 0.6
    xi: float = 0.01
    # The deployed legacy model is deliberately mediocre (barely trained
    # logistic regression): new models then have genuine room to improve
    # per-group impact, which is the regime the sweep is meant to probe.
    behavior_train_n: int = 2000
    behavior_steps: int = 20
    behavior_learning_rate: float = 0.05
    search: SearchConfig = SearchConfig(generations=60)
    world: WorldConfig | None = None  # template; alpha is overridden per cell

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if any(b <= a for a, b in zip(self.ns, self.ns[1:])):
            raise ValueError("ns must be strictly increasing")
        if self.base_seed < 0:
            raise ValueError("base_seed must be nonnegative")

    def to_dict(self) -> dict:
        out = {
            "alphas": list(self.alphas), "ns": list(self.ns),
            "trials": self.trials, "delta_di": self.delta_di,
            "delta_acc": self.delta_acc, "accuracy_floor": self.accuracy_floor,
            "eval_population_size": self.eval_population_size,
            "base_seed": self.base_seed,
            "candidate_fraction": self.candidate_fraction, "xi": self.xi,
            "behavior_train_n": self.behavior_train_n,
            "behavior_steps": self.behavior_steps,
            "behavior_learning_rate": self.behavior_learning_rate,
            "search": {"population_size": self.search.population_size,
                       "generations": self.search.generations,
                       "initial_step": self.search.initial_step},
        }
        if self.world is not None:
            out["world"] = self.world.to_dict()
        return out

    @classmethod
    def from_dict(cls, obj: dict) -> "SweepConfig":
        kwargs = {}
        for key in ("trials", "eval_population_size", "base_seed",
                    "behavior_train_n", "behavior_steps"):
            if key in obj:
                kwargs[key] = int(obj[key])
        for key in ("delta_di", "delta_acc", "accuracy_floor",
                    "candidate_fraction", "xi", "behavior_learning_rate"):
            if key in obj:
                kwargs[key] = float(obj[key])
        if "alphas" in obj:
            kwargs["alphas"] = tuple(float(a) for a in obj["alphas"])
        if "ns" in obj:
            kwargs["ns"] = tuple(int(n) for n in obj["ns"])
        if "search" in obj:
            s = obj["search"]
            kwargs["search"] = SearchConfig(
                population_size=s.get("population_size"),
                generations=int(s.get("generations", 60)),
                initial_step=float(s.get("initial_step", 0.5)),
            )
        if "world" in obj and obj["world"] is not None:
            kwargs["world"] = WorldConfig.from_dict(obj["world"])
        return cls(**kwargs)


@dataclass(frozen=True, eq=False)
class SweepRecord:
    alpha: float
    n: int
    trial: int
    returned: bool
    fail_g0: bool
    fail_g1: bool
    fail_acc: bool
    accuracy: float  # nan when no solution was returned
    u0: float
    u1: float
    error: str = field(default="", compare=False)

    def __post_init__(self):
        # The no-solution sentinel is fair by convention; it cannot fail.
        if not self.returned and (self.fail_g0 or self.fail_g1 or self.fail_acc):
            raise ValueError("a trial without a returned solution cannot fail")

    def __eq__(self, other) -> bool:
        # nan fields mark "no value" and compare equal to themselves
        if not isinstance(other, SweepRecord):
            return NotImplemented
        def same(a, b):
            if isinstance(a, float) and isinstance(b, float):
                return a == b or (math.isnan(a) and math.isnan(b))
            return a == b
        fields = ("alpha", "n", "trial", "returned", "fail_g0", "fail_g1",
                  "fail_acc", "accuracy", "u0", "u1")
        return all(same(getattr(self, f), getattr(other, f)) for f in fields)


def trial_seed(base_seed: int, alpha: float, n: int, trial: int) -> int:
    """Stable per-trial seed derived from the sweep coordinates."""
    ss = np.random.SeedSequence((base_seed, int(round(alpha * 10_000)), n, trial))
    return int(ss.generate_state(1)[0])


def _world_for(cfg: SweepConfig, alpha: float) -> WorldConfig:
    template = cfg.world if cfg.world is not None else WorldConfig(alpha=alpha)
    return dataclasses.replace(template, alpha=alpha)


def run_trial(alpha: float, n: int, seed: int, cfg: SweepConfig,
              trial: int = 0) -> SweepRecord:
    """One independent trial: build the world, train the behavior model,
    log a dataset, run the full algorithm, and score the outcome against
    the analytic ground truth."""
    try:
        ss = np.random.SeedSequence(seed)
        pre_seed, data_seed, elf_seed, eval_seed = (
            int(c.generate_state(1)[0]) for c in ss.spawn(4))
        world = _world_for(cfg, alpha)

        pre_rng = np.random.default_rng(pre_seed)
        Xp, yp, _ = draw_base_sample(world, cfg.behavior_train_n, pre_rng)
        beta = fit_softmax(Xp, yp, L=2, steps=cfg.behavior_steps,
                           learning_rate=cfg.behavior_learning_rate)

        dataset = generate_behavior_dataset(world, n, beta, seed=data_seed)
        taus = compute_tolerances(dataset)

        constraints = (
            DIConstraint(GroupEquals(0), taus[0], cfg.delta_di, TTest(), name="g0"),
            DIConstraint(GroupEquals(1), taus[1], cfg.delta_di, TTest(), name="g1"),
            DIConstraint(Always(), cfg.accuracy_floor, cfg.delta_acc, TTest(),
                         metric=ACCURACY, name="acc"),
        )
        elf_cfg = ElfConfig(constraints=constraints,
                            candidate_fraction=cfg.candidate_fraction,
                            cost=CostConfig(constraints, xi=cfg.xi),
                            search=cfg.search, seed=elf_seed)
        outcome = run_elf(dataset, beta, elf_cfg)

        uppers = {r.constraint.name: r.upper for r in outcome.reports}
        u0 = uppers.get("g0")
        u1 = uppers.get("g1")

        if not outcome.is_solution:
            return SweepRecord(alpha, n, trial, False, False, False, False,
                               math.nan,
                               math.nan if u0 is None else u0,
                               math.nan if u1 is None else u1)

        pi = StochasticLinearClassifier(outcome.theta)
        population = generate_behavior_dataset(world, cfg.eval_population_size,
                                               beta, seed=eval_seed)
        true_g0 = true_g_oracle(pi, population, constraints[0], world)
        true_g1 = true_g_oracle(pi, population, constraints[1], world)
        true_acc = accuracy(pi, population)
        return SweepRecord(alpha, n, trial, True,
                           true_g0 > 0.0, true_g1 > 0.0,
                           true_acc < cfg.accuracy_floor, true_acc,
                           math.nan if u0 is None else u0,
                           math.nan if u1 is None else u1)
    except Exception as exc:  # noqa: BLE001 - error records, sweep continues
        return SweepRecord(alpha, n, trial, False, False, False, False,
                           math.nan, math.nan, math.nan,
                           error=f"{type(exc).__name__}: {exc}")


def _run_task(task) -> SweepRecord:
    alpha, n, trial, seed, cfg = task
    return run_trial(alpha, n, seed, cfg, trial=trial)


def run_sweep(cfg: SweepConfig, jobs: int | None = None) -> list[SweepRecord]:
    """All (alpha, n, trial) cells; trials run in parallel across
    processes and the record order is independent of scheduling."""
    tasks = [(alpha, n, trial, trial_seed(cfg.base_seed, alpha, n, trial), cfg)
             for alpha in cfg.alphas for n in cfg.ns
             for trial in range(cfg.trials)]
    if jobs is None:
        jobs = os.cpu_count() or 1
    if jobs <= 1 or len(tasks) == 1:
        records = [_run_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunk = max(1, len(tasks) // (jobs * 8))
            records = list(pool.map(_run_task, tasks, chunksize=chunk))
    records.sort(key=lambda r: (r.alpha, r.n, r.trial))
    return records


@dataclass(frozen=True)
class AggregateRow:
    alpha: float
    n: int
    trials: int
    failrate_g0: float
    se_g0: float
    failrate_g1: float
    se_g1: float
    solution_rate: float
    se_sol: float
    mean_acc: float | None  # None when no trial returned a solution
    se_acc: float | None


def _binomial_se(p: float, n: int) -> float:
    return math.sqrt(p * (1.0 - p) / n)


def aggregate(records: list[SweepRecord]) -> list[AggregateRow]:
    """Per-(alpha, n) summary; accuracy is averaged over returned trials
    only, and error records are excluded from every rate."""
    if not records:
        raise ValueError("no records to aggregate")
    cells: dict[tuple[float, int], list[SweepRecord]] = {}
    for r in records:
        if r.error:
            continue
        cells.setdefault((r.alpha, r.n), []).append(r)

    rows = []
    for (alpha, n) in sorted(cells):
        group = cells[(alpha, n)]
        k = len(group)
        f0 = sum(r.fail_g0 for r in group) / k
        f1 = sum(r.fail_g1 for r in group) / k
        sol = sum(r.returned for r in group) / k
        accs = [r.accuracy for r in group if r.returned]
        if accs:
            mean_acc = float(np.mean(accs))
            se_acc = float(np.std(accs, ddof=1) / math.sqrt(len(accs))) if len(accs) > 1 else 0.0
        else:
            mean_acc = None
            se_acc = None
        rows.append(AggregateRow(alpha, n, k, f0, _binomial_se(f0, k),
                                 f1, _binomial_se(f1, k), sol,
                                 _binomial_se(sol, k), mean_acc, se_acc))
    return rows


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def write_records_csv(records: list[SweepRecord], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(RECORD_HEADER.split(","))
        for r in records:
            if r.error:
                continue
            w.writerow([_fmt(r.alpha), r.n, r.trial, int(r.returned),
                        int(r.fail_g0), int(r.fail_g1), int(r.fail_acc),
                        _fmt(r.accuracy), _fmt(r.u0), _fmt(r.u1)])


def write_aggregate_csv(rows: list[AggregateRow], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(AGGREGATE_HEADER.split(","))
        for r in rows:
            w.writerow([_fmt(r.alpha), r.n, r.trials,
                        _fmt(r.failrate_g0), _fmt(r.se_g0),
                        _fmt(r.failrate_g1), _fmt(r.se_g1),
                        _fmt(r.solution_rate), _fmt(r.se_sol),
                        "" if r.mean_acc is None else _fmt(r.mean_acc),
                        "" if r.se_acc is None else _fmt(r.se_acc)])
