"""Softmax-linear stochastic classifiers.

Every classifier here assigns strictly positive probability to every
label for every input (full support), which keeps importance weights
finite no matter which pair of models is compared.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .data import Dataset

# Smallest label probability ever reported. Keeps outputs strictly inside
# (0, 1) even when score gaps exceed the exp underflow threshold.
PROB_FLOOR = 1e-12


@dataclass(frozen=True, eq=False)
class StochasticLinearClassifier:
    """Linear scores per label plus bias, squashed through softmax.

    theta has shape (L, d+1); column d holds the bias. Instances are
    immutable value objects; prediction is reentrant.
    """

    theta: np.ndarray

    def __post_init__(self):
        th = np.ascontiguousarray(self.theta, dtype=float)
        if th.ndim != 2 or th.shape[1] < 2:
            raise ValueError("theta must have shape (L, d+1)")
        if not np.all(np.isfinite(th)):
            raise ValueError("theta must be finite")
        th.setflags(write=False)
        object.__setattr__(self, "theta", th)

    @property
    def L(self) -> int:
        return self.theta.shape[0]

    @property
    def d(self) -> int:
        return self.theta.shape[1] - 1

    def to_json(self) -> str:
        return json.dumps({"L": self.L, "d": self.d,
                           "theta": self.theta.ravel().tolist()})

    @classmethod
    def from_json(cls, text: str) -> "StochasticLinearClassifier":
        obj = json.loads(text)
        theta = np.array(obj["theta"], dtype=float).reshape(obj["L"], obj["d"] + 1)
        return cls(theta)


def _with_bias(X: np.ndarray) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X, dtype=float))
    return np.hstack([X, np.ones((X.shape[0], 1))])


def _softmax_rows(scores: np.ndarray) -> np.ndarray:
    z = scores - scores.max(axis=1, keepdims=True)
    p = np.exp(z)
    p /= p.sum(axis=1, keepdims=True)
    # Clip-and-renormalize so no label ever has probability exactly 0 or 1.
    p = np.clip(p, PROB_FLOOR, None)
    p /= p.sum(axis=1, keepdims=True)
    return p


def predict_proba_batch(clf: StochasticLinearClassifier, X: np.ndarray) -> np.ndarray:
    """Label probabilities for each row of X, shape (n, L)."""
    Xb = _with_bias(X)
    if Xb.shape[1] != clf.d + 1:
        raise ValueError(f"expected {clf.d} features, got {Xb.shape[1] - 1}")
    return _softmax_rows(Xb @ clf.theta.T)


def predict_proba(clf: StochasticLinearClassifier, x: np.ndarray) -> np.ndarray:
    """Probability vector over the L labels for a single input."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or not np.all(np.isfinite(x)):
        raise ValueError("x must be a finite 1-d vector")
    return predict_proba_batch(clf, x[None, :])[0]


def sample_prediction(clf: StochasticLinearClassifier, x: np.ndarray,
                      rng: np.random.Generator) -> int:
    p = predict_proba(clf, x)
    return int(rng.choice(clf.L, p=p))


def sample_predictions_batch(clf: StochasticLinearClassifier, X: np.ndarray,
                             rng: np.random.Generator) -> np.ndarray:
    """Draw one label per row of X from the classifier's distribution."""
    p = predict_proba_batch(clf, X)
    u = rng.random(p.shape[0])
    return (p.cumsum(axis=1) < u[:, None]).sum(axis=1)


def _true_label_probs(clf: StochasticLinearClassifier, d: Dataset) -> np.ndarray:
    if d.n == 0:
        raise ValueError("dataset must be nonempty")
    p = predict_proba_batch(clf, d.X)
    return p[np.arange(d.n), d.y]


def expected_loss(clf: StochasticLinearClassifier, d: Dataset) -> float:
    """Expected 0/1 loss of the stochastic classifier: 1 - mean P(correct)."""
    return 1.0 - float(np.mean(_true_label_probs(clf, d)))


def accuracy(clf: StochasticLinearClassifier, d: Dataset) -> float:
    return 1.0 - expected_loss(clf, d)


def nll_loss(clf: StochasticLinearClassifier, d: Dataset) -> float:
    """Mean negative log-likelihood; config alternative to the 0/1 loss."""
    return float(np.mean(-np.log(_true_label_probs(clf, d))))


def nll_gradient(theta: np.ndarray, X: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Gradient of the mean NLL of a softmax-linear model w.r.t. theta."""
    theta = np.asarray(theta, dtype=float)
    Xb = _with_bias(X)
    p = _softmax_rows(Xb @ theta.T)
    onehot = np.zeros_like(p)
    onehot[np.arange(len(y)), y] = 1.0
    return (p - onehot).T @ Xb / len(y)


def fit_softmax(X: np.ndarray, y: np.ndarray, L: int, steps: int = 2000,
                learning_rate: float = 0.1, seed: int = 0) -> StochasticLinearClassifier:
    """Fit a softmax-linear model by full-batch gradient descent on the NLL.

    Zero initialization; the seed is accepted for interface stability but
    full-batch descent is already deterministic.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    y = np.asarray(y, dtype=np.int64)
    theta = np.zeros((L, X.shape[1] + 1))
    for _ in range(steps):
        g = nll_gradient(theta, X, y)
        if not np.all(np.isfinite(g)):
            raise FloatingPointError("non-finite gradient during behavior training")
        theta -= learning_rate * g
    return StochasticLinearClassifier(theta)


def fit_behavior_model(d: Dataset, steps: int = 2000, learning_rate: float = 0.1,
                       seed: int = 0) -> StochasticLinearClassifier:
    """Train the logged-data behavior model on a dataset's (X, y) columns."""
    if d.n == 0:
        raise ValueError("dataset must be nonempty")
    return fit_softmax(d.X, d.y, d.L, steps=steps, learning_rate=learning_rate,
                       seed=seed)
