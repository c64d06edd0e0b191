"""Off-policy estimates of delayed-impact objectives from logged data.

A constraint g(theta) = tau - E[I | c] is estimated per logged example
by reweighting the observed impact with the ratio of the new model's
probability of the logged prediction to the behavior model's. The
per-example values tau - w * i are the inputs to the confidence bounds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bounds import BoundMethod, Hoeffding, TTest
from .classifier import StochasticLinearClassifier, predict_proba, predict_proba_batch
from .data import ConditionalPredicate, Dataset
from .world import WorldConfig

IMPACT = "impact"
ACCURACY = "accuracy"

# Behavior probabilities below this indicate broken full support.
_UNDERFLOW = 1e-300


@dataclass(frozen=True)
class DIConstraint:
    """One objective of the form tau - E[metric | predicate] <= 0.

    metric "impact" uses importance-sampled delayed impact; "accuracy"
    uses the per-example probability of a correct prediction.
    """

    predicate: ConditionalPredicate
    tau: float
    delta: float
    bound_method: BoundMethod
    metric: str = IMPACT
    name: str = ""

    def __post_init__(self):
        if not (0.0 < self.delta < 1.0):
            raise ValueError("delta must be in (0, 1)")
        if self.metric not in (IMPACT, ACCURACY):
            raise ValueError(f"unknown metric {self.metric!r}")

    def to_dict(self) -> dict:
        bound = ({"method": "ttest"} if isinstance(self.bound_method, TTest)
                 else {"method": "hoeffding", "a": self.bound_method.a,
                       "b": self.bound_method.b})
        return {"predicate": self.predicate.to_dict(), "tau": self.tau,
                "delta": self.delta, "bound": bound, "metric": self.metric,
                "name": self.name}


@dataclass(frozen=True, eq=False)
class GEstimateVector:
    """Per-example objective estimates for one constraint, dataset order."""

    values: np.ndarray
    constraint: DIConstraint

    @property
    def m(self) -> int:
        return self.values.size


def importance_weight(pi: StochasticLinearClassifier,
                      beta: StochasticLinearClassifier,
                      x: np.ndarray, y_hat_beta: int) -> float:
    """pi(x, y_hat) / beta(x, y_hat) for one logged prediction."""
    p_beta = float(predict_proba(beta, x)[y_hat_beta])
    if p_beta < _UNDERFLOW:
        raise FloatingPointError("behavior probability underflow breaks support")
    return float(predict_proba(pi, x)[y_hat_beta]) / p_beta


def importance_weights_batch(pi: StochasticLinearClassifier,
                             beta: StochasticLinearClassifier,
                             d: Dataset,
                             beta_logged_probs: np.ndarray | None = None) -> np.ndarray:
    """Importance weights for every example of d.

    beta_logged_probs may carry precomputed beta probabilities of the
    logged predictions (they do not depend on pi, so callers evaluating
    many candidate models can compute them once).
    """
    rows = np.arange(d.n)
    if beta_logged_probs is None:
        beta_logged_probs = predict_proba_batch(beta, d.X)[rows, d.y_hat_beta]
    if beta_logged_probs.min() < _UNDERFLOW:
        raise FloatingPointError("behavior probability underflow breaks support")
    pi_probs = predict_proba_batch(pi, d.X)[rows, d.y_hat_beta]
    return pi_probs / beta_logged_probs


def g_estimates(pi: StochasticLinearClassifier, beta: StochasticLinearClassifier,
                safety: Dataset, c: DIConstraint) -> GEstimateVector:
    """Importance-sampled estimates tau - w * i for predicate-matching rows."""
    if c.metric != IMPACT:
        raise ValueError("g_estimates applies to impact constraints")
    if safety.n == 0:
        raise ValueError("dataset must be nonempty")
    mask = c.predicate.mask(safety)
    if not mask.any():
        return GEstimateVector(np.empty(0), c)
    sub = safety.subset(np.flatnonzero(mask))
    w = importance_weights_batch(pi, beta, sub)
    return GEstimateVector(c.tau - w * sub.i_beta, c)


def accuracy_estimates(pi: StochasticLinearClassifier, d: Dataset,
                       c: DIConstraint) -> GEstimateVector:
    """Per-example estimates tau - P(correct) for an accuracy constraint."""
    if c.metric != ACCURACY:
        raise ValueError("accuracy_estimates applies to accuracy constraints")
    mask = c.predicate.mask(d)
    if not mask.any():
        return GEstimateVector(np.empty(0), c)
    idx = np.flatnonzero(mask)
    p_true = predict_proba_batch(pi, d.X[idx])[np.arange(idx.size), d.y[idx]]
    return GEstimateVector(c.tau - p_true, c)


def constraint_estimates(pi: StochasticLinearClassifier,
                         beta: StochasticLinearClassifier | None,
                         d: Dataset, c: DIConstraint) -> GEstimateVector:
    if c.metric == ACCURACY:
        return accuracy_estimates(pi, d, c)
    if beta is None:
        raise ValueError("impact constraints need the behavior model")
    return g_estimates(pi, beta, d, c)


def true_g_oracle(pi: StochasticLinearClassifier, population: Dataset,
                  c: DIConstraint, world: WorldConfig) -> float:
    """Exact constraint value under the synthetic world's impact law.

    For each predicate-matching member of the population the conditional
    expected impact of pi is alpha * pi(x, 1) + (1 - alpha) * mu_t, so
    the population average gives the conditional expectation in closed
    form, with no Monte-Carlo impact draws.
    """
    if c.metric != IMPACT:
        raise ValueError("the impact oracle applies to impact constraints")
    mask = c.predicate.mask(population)
    if not mask.any():
        raise ValueError("no population member matches the constraint predicate")
    idx = np.flatnonzero(mask)
    p1 = predict_proba_batch(pi, population.X[idx])[:, 1]
    mu = np.asarray(world.di_noise, dtype=float)[population.t[idx], 0]
    expected_impact = world.alpha * p1 + (1.0 - world.alpha) * mu
    return c.tau - float(expected_impact.mean())
