"""The held-out safety check that gates returning a trained model.

Each constraint gets a non-inflated high-confidence upper bound from
the safety data; the candidate is returned only if every bound is at or
below zero. "No Solution Found" is a designed outcome, not an error:
it is the algorithm saying it cannot certify fairness from this data.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bounds import Hoeffding, upper_bound
from .classifier import StochasticLinearClassifier
from .data import Dataset
from .estimation import DIConstraint, constraint_estimates


@dataclass(frozen=True)
class ConstraintReport:
    """Diagnostics for one constraint's safety check."""

    constraint: DIConstraint
    matches: int
    upper: float | None     # None when too few matches to bound
    passed: bool


@dataclass(frozen=True, eq=False)
class ElfOutcome:
    """Either a certified parameter matrix or the no-solution sentinel.

    Diagnostics are metadata only: two outcomes are the same answer iff
    their solution payloads agree.
    """

    theta: np.ndarray | None
    reports: tuple[ConstraintReport, ...] = field(default=(), compare=False)
    reason: str = field(default="", compare=False)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ElfOutcome):
            return NotImplemented
        if self.theta is None or other.theta is None:
            return self.theta is None and other.theta is None
        return bool(np.array_equal(self.theta, other.theta))

    @property
    def is_solution(self) -> bool:
        return self.theta is not None

    @classmethod
    def no_solution(cls, reason: str = "",
                    reports: tuple[ConstraintReport, ...] = ()) -> "ElfOutcome":
        return cls(theta=None, reports=reports, reason=reason)


def fairness_test(theta_c: np.ndarray, safety: Dataset,
                  constraints: list[DIConstraint],
                  beta: StochasticLinearClassifier) -> ElfOutcome:
    """Certify theta_c on held-out data or return the NSF sentinel.

    A constraint with too few predicate-matching safety examples to form
    its bound (fewer than 2 for the t interval, fewer than 1 for
    Hoeffding) cannot be certified, which makes the outcome NSF.
    """
    if safety.n == 0:
        raise ValueError("safety set must be nonempty")
    theta_c = np.asarray(theta_c, dtype=float)
    pi = StochasticLinearClassifier(theta_c.reshape(safety.L, safety.d + 1))

    reports = []
    all_passed = True
    for c in constraints:
        entries = constraint_estimates(pi, beta, safety, c).values
        min_m = 1 if isinstance(c.bound_method, Hoeffding) else 2
        if entries.size < min_m:
            reports.append(ConstraintReport(c, entries.size, None, False))
            all_passed = False
            continue
        u = upper_bound(entries, c.delta, c.bound_method)
        ok = u <= 0.0
        reports.append(ConstraintReport(c, entries.size, u, ok))
        all_passed = all_passed and ok

    if all_passed:
        return ElfOutcome(theta=pi.theta, reports=tuple(reports))
    return ElfOutcome.no_solution(reason="constraint bound above zero",
                                  reports=tuple(reports))
