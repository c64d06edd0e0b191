"""Synthetic delayed-impact environment with known ground truth.

Features are per-group Gaussian clusters; the true label law is
logistic in the features and the group, so label likelihood depends on
both. The delayed impact of a prediction y_hat for a person in group t
is

    alpha * y_hat + (1 - alpha) * Normal(mu_t, var_t)

with (mu, var) = (2, 0.5) for group 0 and (1, 1) for group 1 by
default. alpha in [0, 1] controls how strongly predictions drive
impact; at alpha = 0 predictions have none.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .classifier import StochasticLinearClassifier, sample_predictions_batch
from .data import Dataset

# Default label law and cluster geometry. Calibrated so that (a) both
# groups' label-1 base rates sit above one half (0.71 and 0.64), (b) a
# sharp classifier reaches ~0.82 accuracy, leaving headroom over a 0.75
# accuracy floor, and (c) each group's best predict-1 rate clears a
# weakly trained behavior model's rate by a margin wide enough to
# certify improved impact from moderate amounts of data.
_DEFAULT_MEANS = ((0.25, 0.25, 0.15, 0.0, 0.0), (-0.25, -0.25, -0.15, 0.0, 0.0))
_DEFAULT_LABEL_WEIGHTS = (1.6, 1.3, 1.0, 0.7, 0.4)
_DEFAULT_LABEL_BIAS = 0.8
_DEFAULT_GROUP_SHIFT = 1.1
_DEFAULT_DI_NOISE = ((2.0, 0.5), (1.0, 1.0))  # per-group (mean, variance)


@dataclass(frozen=True)
class WorldConfig:
    alpha: float
    d: int = 5
    group_proportions: tuple[float, ...] = (0.5, 0.5)
    feature_means: tuple[tuple[float, ...], ...] = _DEFAULT_MEANS
    label_weights: tuple[float, ...] = _DEFAULT_LABEL_WEIGHTS
    label_bias: float = _DEFAULT_LABEL_BIAS
    group_label_shift: float = _DEFAULT_GROUP_SHIFT
    di_noise: tuple[tuple[float, float], ...] = _DEFAULT_DI_NOISE
    seed: int = 0

    def __post_init__(self):
        if not (0.0 <= self.alpha <= 1.0):
            raise ValueError("alpha must be in [0, 1]")
        if abs(sum(self.group_proportions) - 1.0) > 1e-9:
            raise ValueError("group proportions must sum to 1")
        if any(var <= 0 for _, var in self.di_noise):
            raise ValueError("impact noise variances must be positive")
        if len(self.feature_means) != self.G or len(self.di_noise) != self.G:
            raise ValueError("per-group parameters must cover every group")
        if any(len(m) != self.d for m in self.feature_means):
            raise ValueError("feature means must have dimension d")

    @property
    def G(self) -> int:
        return len(self.group_proportions)

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "d": self.d,
            "group_proportions": list(self.group_proportions),
            "feature_means": [list(m) for m in self.feature_means],
            "label_weights": list(self.label_weights),
            "label_bias": self.label_bias,
            "group_label_shift": self.group_label_shift,
            "di_noise": [list(v) for v in self.di_noise],
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "WorldConfig":
        kwargs = {"alpha": float(obj["alpha"])}
        for key in ("d", "seed"):
            if key in obj:
                kwargs[key] = int(obj[key])
        for key in ("label_bias", "group_label_shift"):
            if key in obj:
                kwargs[key] = float(obj[key])
        if "group_proportions" in obj:
            kwargs["group_proportions"] = tuple(obj["group_proportions"])
        if "feature_means" in obj:
            kwargs["feature_means"] = tuple(tuple(m) for m in obj["feature_means"])
        if "label_weights" in obj:
            kwargs["label_weights"] = tuple(obj["label_weights"])
        if "di_noise" in obj:
            kwargs["di_noise"] = tuple(tuple(v) for v in obj["di_noise"])
        return cls(**kwargs)


def label_probabilities(cfg: WorldConfig, X: np.ndarray, t: np.ndarray) -> np.ndarray:
    """P(Y = 1 | X, T) under the ground-truth label law."""
    w = np.asarray(cfg.label_weights, dtype=float)
    s = X @ w + cfg.label_bias + cfg.group_label_shift * np.asarray(t, dtype=float)
    return 1.0 / (1.0 + np.exp(-s))


def draw_base_sample(cfg: WorldConfig, n: int,
                     rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Draw (X, y, t) from the group mixture and label law."""
    t = rng.choice(cfg.G, size=n, p=np.asarray(cfg.group_proportions))
    means = np.asarray(cfg.feature_means, dtype=float)
    X = means[t] + rng.standard_normal((n, cfg.d))
    y = (rng.random(n) < label_probabilities(cfg, X, t)).astype(np.int64)
    return X, y, t


def draw_delayed_impact(cfg: WorldConfig, y_hat: int, t: int,
                        rng: np.random.Generator) -> float:
    """Impact of predicting y_hat for one person in group t."""
    mu, var = cfg.di_noise[t]
    return cfg.alpha * float(y_hat) + (1.0 - cfg.alpha) * rng.normal(mu, np.sqrt(var))


def draw_delayed_impacts_batch(cfg: WorldConfig, y_hat: np.ndarray, t: np.ndarray,
                               rng: np.random.Generator) -> np.ndarray:
    noise = np.asarray(cfg.di_noise, dtype=float)
    mu = noise[t, 0]
    sd = np.sqrt(noise[t, 1])
    return cfg.alpha * y_hat.astype(float) + (1.0 - cfg.alpha) * rng.normal(mu, sd)


def generate_behavior_dataset(cfg: WorldConfig, n: int,
                              beta: StochasticLinearClassifier,
                              seed: int | None = None) -> Dataset:
    """Log n decisions of the behavior model along with observed impacts."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(cfg.seed if seed is None else seed)
    X, y, t = draw_base_sample(cfg, n, rng)
    y_hat = sample_predictions_batch(beta, X, rng)
    i_beta = draw_delayed_impacts_batch(cfg, y_hat, t, rng)
    return Dataset(X, y, t, y_hat, i_beta, L=2, G=cfg.G)


def compute_tolerances(d: Dataset) -> tuple[float, ...]:
    """Per-group mean observed impact of the behavior model."""
    taus = []
    for g in range(d.G):
        mask = d.t == g
        if not mask.any():
            raise ValueError(f"group {g} missing from dataset")
        taus.append(float(d.i_beta[mask].mean()))
    return tuple(taus)
