"""Logged classification datasets, conditional predicates, and the
stratified candidate/safety partition.

A dataset row is one logged decision: features, true label, sensitive
attribute, the deployed model's sampled prediction, and the delayed
impact later observed for that prediction.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np


class PartitionError(ValueError):
    """Raised when a stratified split would leave one side empty."""


@dataclass(frozen=True, eq=False)
class LabeledExample:
    """One logged record: (x, y, t, y_hat_beta, i_beta)."""

    x: np.ndarray
    y: int
    t: int
    y_hat_beta: int
    i_beta: float

    def __post_init__(self):
        object.__setattr__(self, "x", np.asarray(self.x, dtype=float))
        if not np.all(np.isfinite(self.x)):
            raise ValueError("feature vector must be finite")
        if not np.isfinite(self.i_beta):
            raise ValueError("observed delayed impact must be finite")


@dataclass(frozen=True, eq=False)
class Dataset:
    """Columnar store of logged examples sharing dimensions (d, L, G).

    Arrays are read-only after construction; datasets are safe to share
    across parallel workers.
    """

    X: np.ndarray          # (n, d) float
    y: np.ndarray          # (n,) int, in [0, L)
    t: np.ndarray          # (n,) int, in [0, G)
    y_hat_beta: np.ndarray # (n,) int, in [0, L)
    i_beta: np.ndarray     # (n,) float
    L: int
    G: int

    def __post_init__(self):
        X = np.ascontiguousarray(self.X, dtype=float)
        y = np.asarray(self.y, dtype=np.int64)
        t = np.asarray(self.t, dtype=np.int64)
        yhb = np.asarray(self.y_hat_beta, dtype=np.int64)
        ib = np.asarray(self.i_beta, dtype=float)
        n = X.shape[0]
        if X.ndim != 2:
            raise ValueError("X must be a 2-d array of shape (n, d)")
        for name, arr in (("y", y), ("t", t), ("y_hat_beta", yhb), ("i_beta", ib)):
            if arr.shape != (n,):
                raise ValueError(f"{name} must have shape ({n},)")
        if not np.all(np.isfinite(X)) or not np.all(np.isfinite(ib)):
            raise ValueError("features and impacts must be finite")
        if n and (y.min() < 0 or y.max() >= self.L):
            raise ValueError("label out of range [0, L)")
        if n and (yhb.min() < 0 or yhb.max() >= self.L):
            raise ValueError("logged prediction out of range [0, L)")
        if n and (t.min() < 0 or t.max() >= self.G):
            raise ValueError("sensitive attribute out of range [0, G)")
        for arr in (X, y, t, yhb, ib):
            arr.setflags(write=False)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "y_hat_beta", yhb)
        object.__setattr__(self, "i_beta", ib)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def d(self) -> int:
        return self.X.shape[1]

    @property
    def examples(self) -> list[LabeledExample]:
        return [
            LabeledExample(self.X[i], int(self.y[i]), int(self.t[i]),
                           int(self.y_hat_beta[i]), float(self.i_beta[i]))
            for i in range(self.n)
        ]

    @classmethod
    def from_examples(cls, examples: list[LabeledExample], L: int, G: int) -> "Dataset":
        if not examples:
            raise ValueError("dataset must be nonempty")
        d = examples[0].x.shape[0]
        for ex in examples:
            if ex.x.shape != (d,):
                raise ValueError("all examples must share the feature dimension")
        return cls(
            X=np.stack([ex.x for ex in examples]),
            y=np.array([ex.y for ex in examples]),
            t=np.array([ex.t for ex in examples]),
            y_hat_beta=np.array([ex.y_hat_beta for ex in examples]),
            i_beta=np.array([ex.i_beta for ex in examples]),
            L=L,
            G=G,
        )

    def subset(self, idx: np.ndarray) -> "Dataset":
        return Dataset(self.X[idx], self.y[idx], self.t[idx],
                       self.y_hat_beta[idx], self.i_beta[idx], self.L, self.G)


# --- conditional predicates -------------------------------------------------
#
# Predicates form a small closed grammar (rather than arbitrary callbacks)
# so constraint configurations stay serializable.

@dataclass(frozen=True)
class ConditionalPredicate:
    """Boolean condition over (x, y, t); total and deterministic."""

    def mask(self, d: Dataset) -> np.ndarray:
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class GroupEquals(ConditionalPredicate):
    t: int

    def mask(self, d: Dataset) -> np.ndarray:
        return d.t == self.t

    def to_dict(self) -> dict:
        return {"kind": "group_equals", "value": self.t}


@dataclass(frozen=True)
class LabelEquals(ConditionalPredicate):
    y: int

    def mask(self, d: Dataset) -> np.ndarray:
        return d.y == self.y

    def to_dict(self) -> dict:
        return {"kind": "label_equals", "value": self.y}


@dataclass(frozen=True)
class And(ConditionalPredicate):
    parts: tuple[ConditionalPredicate, ...]

    def __init__(self, parts):
        object.__setattr__(self, "parts", tuple(parts))

    def mask(self, d: Dataset) -> np.ndarray:
        m = np.ones(d.n, dtype=bool)
        for p in self.parts:
            m &= p.mask(d)
        return m

    def to_dict(self) -> dict:
        return {"kind": "and", "parts": [p.to_dict() for p in self.parts]}


@dataclass(frozen=True)
class Always(ConditionalPredicate):
    """The trivially true condition."""

    def mask(self, d: Dataset) -> np.ndarray:
        return np.ones(d.n, dtype=bool)

    def to_dict(self) -> dict:
        return {"kind": "true"}


def predicate_from_dict(spec: dict) -> ConditionalPredicate:
    kind = spec.get("kind")
    if kind == "group_equals":
        return GroupEquals(int(spec["value"]))
    if kind == "label_equals":
        return LabelEquals(int(spec["value"]))
    if kind == "and":
        return And([predicate_from_dict(p) for p in spec["parts"]])
    if kind == "true":
        return Always()
    raise ValueError(f"unknown predicate kind: {kind!r}")


def evaluate_predicate(p: ConditionalPredicate, ex: LabeledExample) -> bool:
    """Evaluate a predicate on a single example."""
    if isinstance(p, GroupEquals):
        return ex.t == p.t
    if isinstance(p, LabelEquals):
        return ex.y == p.y
    if isinstance(p, And):
        return all(evaluate_predicate(q, ex) for q in p.parts)
    if isinstance(p, Always):
        return True
    raise TypeError(f"unknown predicate type: {type(p).__name__}")


# --- stratified partition ----------------------------------------------------

def stratified_partition(d: Dataset, candidate_fraction: float,
                         seed: int) -> tuple[Dataset, Dataset]:
    """Split a dataset into (candidate, safety) sets, stratified on (t, y).

    Within every (t, y) stratum the candidate share is within one example
    of ``candidate_fraction`` (half-up rounding). The two sides partition
    the input; each side preserves the original example order. The split
    is bit-identical for a given seed.

    Raises PartitionError if either side would come out empty.
    """
    if not (0.0 < candidate_fraction < 1.0):
        raise ValueError("candidate_fraction must be in (0, 1)")
    if d.n == 0:
        raise ValueError("dataset must be nonempty")

    rng = np.random.default_rng(seed)
    strata_key = d.t.astype(np.int64) * d.L + d.y.astype(np.int64)
    cand_idx: list[np.ndarray] = []
    for key in np.unique(strata_key):
        members = np.flatnonzero(strata_key == key)
        k = int(np.floor(candidate_fraction * members.size + 0.5))
        chosen = rng.permutation(members.size)[:k]
        cand_idx.append(members[chosen])

    cand = np.sort(np.concatenate(cand_idx)) if cand_idx else np.array([], dtype=int)
    mask = np.zeros(d.n, dtype=bool)
    mask[cand] = True
    safe = np.flatnonzero(~mask)

    if cand.size == 0:
        raise PartitionError("candidate set is empty after stratified split")
    if safe.size == 0:
        raise PartitionError("safety set is empty after stratified split")
    return d.subset(cand), d.subset(safe)


# --- CSV interchange ----------------------------------------------------------
#
# Canonical on-disk format: header x0..x{d-1},y,t,yhat_beta,i_beta; floats
# written with 17 significant digits so reads round-trip exactly.

def write_csv(d: Dataset, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow([f"x{j}" for j in range(d.d)] + ["y", "t", "yhat_beta", "i_beta"])
        for i in range(d.n):
            row = [f"{v:.17g}" for v in d.X[i]]
            row += [str(int(d.y[i])), str(int(d.t[i])), str(int(d.y_hat_beta[i]))]
            row.append(f"{d.i_beta[i]:.17g}")
            w.writerow(row)


def read_csv(path, L: int, G: int) -> Dataset:
    with open(path, newline="") as fh:
        r = csv.reader(fh)
        header = next(r)
        expected_tail = ["y", "t", "yhat_beta", "i_beta"]
        if header[-4:] != expected_tail:
            raise ValueError(f"bad dataset header, expected ...,{','.join(expected_tail)}")
        d = len(header) - 4
        X, y, t, yhb, ib = [], [], [], [], []
        for row in r:
            X.append([float(v) for v in row[:d]])
            y.append(int(row[d]))
            t.append(int(row[d + 1]))
            yhb.append(int(row[d + 2]))
            ib.append(float(row[d + 3]))
    return Dataset(np.array(X, dtype=float).reshape(len(y), d), np.array(y),
                   np.array(t), np.array(yhb), np.array(ib), L=L, G=G)
