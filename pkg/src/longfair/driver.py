"""End-to-end training run: partition, candidate selection, safety check.

The candidate data never touches the safety check and vice versa; the
only thing candidate selection learns about the safety set is its size,
which it uses to predict the eventual bound widths.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from .candidate import CostConfig, SearchConfig, select_candidate
from .classifier import StochasticLinearClassifier
from .data import Dataset, PartitionError, stratified_partition
from .estimation import DIConstraint
from .safety import ElfOutcome, fairness_test


@dataclass(frozen=True)
class ElfConfig:
    constraints: tuple[DIConstraint, ...]
    candidate_fraction: float = 0.6
    cost: CostConfig | None = None
    search: SearchConfig = SearchConfig()
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "constraints", tuple(self.constraints))
        if not self.constraints:
            raise ValueError("need at least one constraint")


def _derived_seeds(seed: int, count: int) -> list[int]:
    ss = np.random.SeedSequence(seed)
    return [int(child.generate_state(1)[0]) for child in ss.spawn(count)]


def run_elf(d: Dataset, beta: StochasticLinearClassifier,
            cfg: ElfConfig) -> ElfOutcome:
    """Train on the candidate split, certify on the safety split.

    Component failures (degenerate partitions, too little data) surface
    as NSF with a diagnostic reason rather than exceptions; NSF is the
    algorithm's designed way of declining to answer.
    """
    if d.n < 4:
        return ElfOutcome.no_solution(reason="fewer than 4 examples")
    for c in cfg.constraints:
        if not c.predicate.mask(d).any():
            return ElfOutcome.no_solution(
                reason=f"no examples match constraint {c.name or c.predicate.to_dict()}")

    partition_seed, search_seed = _derived_seeds(cfg.seed, 2)
    try:
        d_c, d_f = stratified_partition(d, cfg.candidate_fraction, partition_seed)
    except PartitionError as exc:
        return ElfOutcome.no_solution(reason=str(exc))

    base_cost = cfg.cost if cfg.cost is not None else CostConfig(cfg.constraints)
    cost_cfg = dataclasses.replace(base_cost, constraints=cfg.constraints,
                                   n_future=max(d_f.n, 2))
    search_cfg = dataclasses.replace(cfg.search, seed=search_seed)

    try:
        theta_c = select_candidate(d_c, cost_cfg, search_cfg, beta)
    except (ValueError, FloatingPointError, np.linalg.LinAlgError) as exc:
        return ElfOutcome.no_solution(reason=f"candidate selection failed: {exc}")

    return fairness_test(theta_c, d_f, list(cfg.constraints), beta)
