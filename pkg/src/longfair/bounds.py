"""High-confidence upper bounds on a sample mean.

Two interval families: Student's t (assumes an approximately normal
sample mean) and Hoeffding (assumes samples bounded in a known [a, b]).
The inflated variants widen the interval by a factor lambda and size it
as if the future test set (n_future points) were being used, which is
how candidate selection predicts the outcome of the held-out test.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats


@dataclass(frozen=True)
class Hoeffding:
    a: float
    b: float

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError("Hoeffding range requires a < b")


@dataclass(frozen=True)
class TTest:
    pass


BoundMethod = Hoeffding | TTest


@dataclass(frozen=True, eq=False)
class BoundRequest:
    """Inputs for one bound evaluation."""

    samples: np.ndarray
    delta: float
    method: BoundMethod
    inflated: bool = False
    lam: float = 2.0
    n_future: int = 0


def t_quantile(p: float, dof: int) -> float:
    """p-quantile of Student's t with dof degrees of freedom."""
    if dof < 1:
        raise ValueError("degrees of freedom must be >= 1")
    return float(stats.t.ppf(p, dof))


def _check_delta(delta: float) -> None:
    if not (0.0 < delta < 1.0):
        raise ValueError("delta must be in (0, 1)")


def ttest_upper(samples: np.ndarray, delta: float) -> float:
    """Sample mean plus the one-sided t interval half-width."""
    _check_delta(delta)
    z = np.asarray(samples, dtype=float)
    m = z.size
    if m < 2:
        raise ValueError("t-based bound needs at least 2 samples")
    sd = float(np.std(z, ddof=1))
    mean = float(np.mean(z))
    if sd == 0.0:
        return mean
    return mean + sd / np.sqrt(m) * t_quantile(1.0 - delta, m - 1)


def hoeffding_upper(samples: np.ndarray, delta: float, a: float, b: float) -> float:
    """Sample mean plus (b-a) * sqrt(log(1/delta) / (2m))."""
    _check_delta(delta)
    if not a < b:
        raise ValueError("Hoeffding range requires a < b")
    z = np.asarray(samples, dtype=float)
    m = z.size
    if m < 1:
        raise ValueError("Hoeffding bound needs at least 1 sample")
    if z.min() < a or z.max() > b:
        raise ValueError("sample outside the stated [a, b] range")
    return float(np.mean(z)) + (b - a) * float(np.sqrt(np.log(1.0 / delta) / (2.0 * m)))


def inflated_upper(req: BoundRequest) -> float:
    """Candidate-selection bound: mean of the observed samples plus lam
    times the interval half-width computed with n_future in place of the
    sample count (both under the square root and in the t degrees of
    freedom)."""
    _check_delta(req.delta)
    z = np.asarray(req.samples, dtype=float)
    mean = float(np.mean(z)) if z.size else float("nan")
    if isinstance(req.method, Hoeffding):
        if z.size < 1:
            raise ValueError("Hoeffding bound needs at least 1 sample")
        if z.min() < req.method.a or z.max() > req.method.b:
            raise ValueError("sample outside the stated [a, b] range")
        if req.n_future < 1:
            raise ValueError("n_future must be >= 1")
        width = (req.method.b - req.method.a) * float(
            np.sqrt(np.log(1.0 / req.delta) / (2.0 * req.n_future)))
        return mean + req.lam * width
    if isinstance(req.method, TTest):
        if z.size < 2:
            raise ValueError("t-based bound needs at least 2 samples")
        if req.n_future < 2:
            raise ValueError("n_future must be >= 2 for the t-based bound")
        sd = float(np.std(z, ddof=1))
        if sd == 0.0 or req.lam == 0.0:
            return mean
        return mean + req.lam * sd / np.sqrt(req.n_future) * t_quantile(
            1.0 - req.delta, req.n_future - 1)
    raise TypeError(f"unknown bound method: {type(req.method).__name__}")


def upper_bound(samples: np.ndarray, delta: float, method: BoundMethod) -> float:
    """Dispatch to the non-inflated bound for the given method."""
    if isinstance(method, Hoeffding):
        return hoeffding_upper(samples, delta, method.a, method.b)
    if isinstance(method, TTest):
        return ttest_upper(samples, delta)
    raise TypeError(f"unknown bound method: {type(method).__name__}")
