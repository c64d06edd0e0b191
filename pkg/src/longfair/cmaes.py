"""Covariance-matrix-adaptation evolution strategy for black-box
minimization over real vectors.

Standard rank-mu implementation: sample a population around the current
mean, rank by objective value, recombine the best half into a new mean,
and adapt the step size and covariance through the usual evolution
paths. Deterministic for a given seed; non-finite objective values are
treated as +inf so the search continues past bad regions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def default_population_size(dim: int) -> int:
    return 4 + int(np.floor(3.0 * np.log(dim)))


@dataclass
class CmaResult:
    best_x: np.ndarray
    best_f: float
    evaluations: int
    generations: int


def minimize(objective, x0: np.ndarray, sigma0: float, generations: int,
             population_size: int | None = None, seed: int = 0) -> CmaResult:
    """Minimize objective(x) starting from x0 with initial step sigma0."""
    x0 = np.asarray(x0, dtype=float)
    dim = x0.size
    if dim < 1:
        raise ValueError("need at least one parameter")
    if generations < 1:
        raise ValueError("generations must be >= 1")
    lam = population_size if population_size is not None else default_population_size(dim)
    if lam < 4:
        raise ValueError("population size must be >= 4")

    mu = lam // 2
    raw = np.log(mu + 0.5) - np.log(np.arange(1, mu + 1))
    weights = raw / raw.sum()
    mueff = 1.0 / np.sum(weights**2)

    cc = (4.0 + mueff / dim) / (dim + 4.0 + 2.0 * mueff / dim)
    cs = (mueff + 2.0) / (dim + mueff + 5.0)
    c1 = 2.0 / ((dim + 1.3) ** 2 + mueff)
    cmu = min(1.0 - c1, 2.0 * (mueff - 2.0 + 1.0 / mueff) / ((dim + 2.0) ** 2 + mueff))
    damps = 1.0 + 2.0 * max(0.0, np.sqrt((mueff - 1.0) / (dim + 1.0)) - 1.0) + cs
    chi_n = np.sqrt(dim) * (1.0 - 1.0 / (4.0 * dim) + 1.0 / (21.0 * dim**2))

    rng = np.random.default_rng(seed)
    mean = x0.copy()
    sigma = float(sigma0)
    pc = np.zeros(dim)
    ps = np.zeros(dim)
    C = np.eye(dim)

    best_x = mean.copy()
    best_f = np.inf
    evals = 0

    for gen in range(generations):
        C = (C + C.T) / 2.0
        eigvals, B = np.linalg.eigh(C)
        eigvals = np.maximum(eigvals, 1e-20)
        D = np.sqrt(eigvals)
        inv_sqrt_C = (B / D) @ B.T

        z = rng.standard_normal((lam, dim))
        y = z @ (B * D).T                  # y_k ~ N(0, C)
        X = mean + sigma * y
        f = np.empty(lam)
        for k in range(lam):
            val = objective(X[k])
            f[k] = val if np.isfinite(val) else np.inf
        evals += lam

        order = np.argsort(f, kind="stable")
        if f[order[0]] < best_f:
            best_f = float(f[order[0]])
            best_x = X[order[0]].copy()

        elite = X[order[:mu]]
        old_mean = mean
        mean = weights @ elite

        ps = (1.0 - cs) * ps + np.sqrt(cs * (2.0 - cs) * mueff) * (
            inv_sqrt_C @ (mean - old_mean)) / sigma
        hsig = (np.linalg.norm(ps)
                / np.sqrt(1.0 - (1.0 - cs) ** (2 * (gen + 1)))
                / chi_n) < 1.4 + 2.0 / (dim + 1.0)
        pc = (1.0 - cc) * pc + hsig * np.sqrt(cc * (2.0 - cc) * mueff) * (
            mean - old_mean) / sigma

        artmp = (elite - old_mean) / sigma
        C = ((1.0 - c1 - cmu) * C
             + c1 * (np.outer(pc, pc) + (not hsig) * cc * (2.0 - cc) * C)
             + cmu * (artmp.T * weights) @ artmp)

        sigma *= np.exp((cs / damps) * (np.linalg.norm(ps) / chi_n - 1.0))
        if not np.isfinite(sigma) or sigma > 1e12:
            sigma = 1e12

    return CmaResult(best_x=best_x, best_f=best_f, evaluations=evals,
                     generations=generations)
