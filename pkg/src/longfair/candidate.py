"""Candidate selection: a constraint-aware cost over model parameters
and the derivative-free search that minimizes it.

The cost predicts whether a model would survive the held-out test by
computing inflated upper bounds on every constraint from the candidate
data. Models predicted to pass cost their training loss; anything else
costs the maximum loss plus its predicted constraint violations, so the
search is pushed toward the feasible region before it polishes loss.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import cmaes
from .bounds import BoundRequest, Hoeffding, inflated_upper
from .classifier import StochasticLinearClassifier, _softmax_rows, predict_proba_batch
from .data import Dataset
from .estimation import ACCURACY, DIConstraint

EXPECTED01 = "expected01"
NLL = "nll"

# Supremum of the expected 0/1 loss over all parameter matrices; the
# inner maximization is vacuous for a loss bounded in [0, 1].
LOSS_MAX = 1.0


@dataclass(frozen=True)
class CostConfig:
    constraints: tuple[DIConstraint, ...]
    xi: float = 0.01
    lam: float = 2.0
    n_future: int = 2
    loss_kind: str = EXPECTED01

    def __post_init__(self):
        object.__setattr__(self, "constraints", tuple(self.constraints))
        if self.xi <= 0:
            raise ValueError("xi must be positive")
        if self.n_future < 2:
            raise ValueError("n_future must be >= 2")
        if self.loss_kind not in (EXPECTED01, NLL):
            raise ValueError(f"unknown loss kind {self.loss_kind!r}")


@dataclass(frozen=True)
class SearchConfig:
    population_size: int | None = None  # None: 4 + floor(3 ln dim)
    generations: int = 150
    initial_step: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if self.population_size is not None and self.population_size < 4:
            raise ValueError("population size must be >= 4")
        if self.generations < 1:
            raise ValueError("generations must be >= 1")


class CostEvaluator:
    """Precomputes everything about the candidate set that does not
    depend on theta, then evaluates the cost for many thetas cheaply."""

    def __init__(self, candidate_set: Dataset, cfg: CostConfig,
                 beta: StochasticLinearClassifier):
        if candidate_set.n == 0:
            raise ValueError("candidate set must be nonempty")
        self.cfg = cfg
        self.d = candidate_set
        self.L = candidate_set.L
        self.dim_cols = candidate_set.d + 1
        self.Xb = np.hstack([candidate_set.X,
                             np.ones((candidate_set.n, 1))])
        rows = np.arange(candidate_set.n)
        beta_probs = predict_proba_batch(beta, candidate_set.X)
        self.beta_logged = beta_probs[rows, candidate_set.y_hat_beta]
        self.rows = rows
        self.prepared = []
        for c in cfg.constraints:
            idx = np.flatnonzero(c.predicate.mask(candidate_set))
            self.prepared.append((c, idx))

    def _probs(self, theta: np.ndarray) -> np.ndarray:
        return _softmax_rows(self.Xb @ theta.T)

    def upper_bounds(self, theta: np.ndarray) -> list[float | None]:
        """Inflated bound per constraint; None marks a constraint with
        too few matching examples to bound at all."""
        theta = np.asarray(theta, dtype=float).reshape(self.L, self.dim_cols)
        p = self._probs(theta)
        out: list[float | None] = []
        for c, idx in self.prepared:
            if c.metric == ACCURACY:
                entries = c.tau - p[idx, self.d.y[idx]]
            else:
                w = p[idx, self.d.y_hat_beta[idx]] / self.beta_logged[idx]
                entries = c.tau - w * self.d.i_beta[idx]
            min_m = 1 if isinstance(c.bound_method, Hoeffding) else 2
            if entries.size < min_m:
                out.append(None)
                continue
            req = BoundRequest(samples=entries, delta=c.delta,
                               method=c.bound_method, inflated=True,
                               lam=self.cfg.lam, n_future=self.cfg.n_future)
            try:
                out.append(inflated_upper(req))
            except ValueError:
                # e.g. estimates outside a Hoeffding range: no valid bound
                # exists for this theta, so predict failure and keep going
                out.append(None)
        return out

    def loss(self, theta: np.ndarray) -> float:
        theta = np.asarray(theta, dtype=float).reshape(self.L, self.dim_cols)
        p_true = self._probs(theta)[self.rows, self.d.y]
        if self.cfg.loss_kind == NLL:
            return float(np.mean(-np.log(p_true)))
        return 1.0 - float(np.mean(p_true))

    def cost(self, theta: np.ndarray) -> float:
        uppers = self.upper_bounds(theta)
        threshold = -self.cfg.xi / 4.0
        if all(u is not None and u <= threshold for u in uppers):
            return self.loss(theta)
        # Predicted failure: constraints with no evidence contribute a
        # fixed surrogate of LOSS_MAX; satisfied ones are clipped at 0 so
        # overshooting them cannot mask another constraint's violation.
        penalty = sum(LOSS_MAX if u is None else max(u, 0.0) for u in uppers)
        return LOSS_MAX + penalty


def cost(theta: np.ndarray, candidate_set: Dataset, cfg: CostConfig,
         beta: StochasticLinearClassifier) -> float:
    """Cost of one parameter matrix on the candidate set."""
    return CostEvaluator(candidate_set, cfg, beta).cost(theta)


def select_candidate(candidate_set: Dataset, cfg: CostConfig,
                     search: SearchConfig,
                     beta: StochasticLinearClassifier) -> np.ndarray:
    """Minimize the cost over parameter matrices; returns the best theta
    found, shaped (L, d+1). Deterministic for a given search seed."""
    ev = CostEvaluator(candidate_set, cfg, beta)
    dim = candidate_set.L * (candidate_set.d + 1)
    result = cmaes.minimize(ev.cost, np.zeros(dim), search.initial_step,
                            generations=search.generations,
                            population_size=search.population_size,
                            seed=search.seed)
    return result.best_x.reshape(candidate_set.L, candidate_set.d + 1)
