"""k-point effective tests and the closed-form bounds built on them.

All tests here are sufficient: a failed test yields ``schedulable=False``,
meaning "unknown", never "unschedulable".
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional


class IndexOrderError(ValueError):
    pass


class UniformBoundError(ValueError):
    pass


@dataclass(frozen=True)
class TestVerdict:
    """Outcome of one schedulability test.

    ``witness`` is the 1-based index of the satisfying test point for the
    k-point test, or the satisfying time for the demand oracle. ``margin`` is
    RHS - LHS of the deciding inequality (non-negative when accepted).
    """

    __test__ = False  # keep pytest from collecting this class

    schedulable: bool
    test: str
    witness: Optional[float] = None
    margin: float = float("nan")

    def __bool__(self):
        return self.schedulable


@dataclass(frozen=True)
class KPointEntry:
    task_id: str
    t: float
    alpha: float
    beta: float
    U: float


@dataclass(frozen=True)
class SplitRecord:
    hp1: tuple
    hp2: tuple
    rule: str


@dataclass(frozen=True)
class KPointParams:
    """Test points and coefficients of a k-point effective test.

    ``entries`` hold the variable-interference tasks in test-point order;
    ``hp2_ids`` name the tasks whose interference was folded into ``C_k_eff``.
    """

    t_k: float
    C_k_eff: float
    entries: tuple = ()
    hp2_ids: tuple = ()
    split: Optional[SplitRecord] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        object.__setattr__(self, "hp2_ids", tuple(self.hp2_ids))
        if not self.t_k > 0:
            raise ValueError("t_k must be positive")
        if not self.C_k_eff > 0:
            raise ValueError("C_k_eff must be positive")
        for e in self.entries:
            if not (e.t > 0 and e.alpha > 0 and e.beta > 0 and e.U > 0):
                raise ValueError(f"entry {e.task_id!r}: t, alpha, beta, U must be positive")

    @property
    def k(self) -> int:
        return len(self.entries) + 1

    @property
    def ratio(self) -> float:
        """C_k_eff / t_k."""
        return self.C_k_eff / self.t_k

    def points(self) -> list:
        return [e.t for e in self.entries] + [self.t_k]


def _check_order(params: KPointParams):
    pts = params.points()
    if any(a > b for a, b in zip(pts, pts[1:])):
        raise IndexOrderError("index order violated")


def evaluate_kpoint(params: KPointParams) -> TestVerdict:
    """Check the k-point condition directly at every test point.

    Point j passes when
    ``C_k_eff + sum_i alpha_i t_i U_i + sum_{i<j} beta_i t_i U_i <= t_j``.
    """
    _check_order(params)
    lhs = params.C_k_eff + sum(e.alpha * e.t * e.U for e in params.entries)
    best = -math.inf
    for j, t_j in enumerate(params.points(), start=1):
        margin = t_j - lhs
        if margin >= 0:
            return TestVerdict(True, "kpoint", witness=j, margin=margin)
        best = max(best, margin)
        if j <= len(params.entries):
            e = params.entries[j - 1]
            lhs += e.beta * e.t * e.U
    return TestVerdict(False, "kpoint", margin=best)


def kpoint_bound(params: KPointParams, j: int) -> float:
    """Left-hand side of the k-point condition at 1-based point ``j``."""
    es = params.entries
    return (params.C_k_eff + sum(e.alpha * e.t * e.U for e in es)
            + sum(e.beta * e.t * e.U for e in es[:j - 1]))


def _uniform(params, alpha, beta):
    if not (alpha > 0 and beta > 0):
        raise UniformBoundError("alpha and beta must be positive")
    for e in params.entries:
        if e.alpha > alpha or e.beta > beta:
            raise UniformBoundError("uniform bound violated")


def hyperbolic_rhs(alpha: float, beta: float, utils) -> float:
    prod = math.prod(beta * u + 1.0 for u in utils)
    return (alpha / beta + 1.0) / prod - alpha / beta


def hyperbolic_test(params: KPointParams, alpha: float, beta: float) -> TestVerdict:
    """Hyperbolic bound under uniform coefficient bounds alpha, beta."""
    _uniform(params, alpha, beta)
    rhs = hyperbolic_rhs(alpha, beta, [e.U for e in params.entries])
    margin = rhs - params.ratio
    return TestVerdict(margin >= 0, "hyperbolic", margin=margin)


def capacity_rhs(k: int, alpha: float, beta: float) -> float:
    # expm1 keeps (alpha + beta)^(1/k) - 1 accurate for very large k
    root_m1 = math.expm1(math.log(alpha + beta) / k)
    return ((k - 1) * root_m1 + (root_m1 + 1.0 - alpha)) / beta


def capacity_test(params: KPointParams, alpha: float, beta: float) -> TestVerdict:
    """Total-utilization bound under uniform coefficient bounds."""
    _uniform(params, alpha, beta)
    lhs = params.ratio + sum(e.U for e in params.entries)
    margin = capacity_rhs(params.k, alpha, beta) - lhs
    return TestVerdict(margin >= 0, "capacity", margin=margin)


def log_utilization_test(params: KPointParams, alpha: float, beta: float) -> TestVerdict:
    """Logarithmic utilization bound under uniform coefficient bounds."""
    _uniform(params, alpha, beta)
    denom = params.ratio + alpha / beta
    if not denom > 0:
        raise ValueError("degenerate ratio")
    rhs = math.log((alpha / beta + 1.0) / denom)
    margin = rhs - beta * sum(e.U for e in params.entries)
    return TestVerdict(margin >= 0, "log_utilization", margin=margin)


def general_rhs(params: KPointParams) -> float:
    es = params.entries
    total = 0.0
    # suffix products prod_{j >= i} (beta_j U_j + 1), built right to left
    suffix = 1.0
    for e in reversed(es):
        suffix *= e.beta * e.U + 1.0
        total += e.U * (e.alpha + e.beta) / suffix
    return 1.0 - total


def general_test(params: KPointParams) -> TestVerdict:
    """Per-task-coefficient bound, evaluated in the stored entry order."""
    margin = general_rhs(params) - params.ratio
    return TestVerdict(margin >= 0, "general", margin=margin)


def max_coefficients(params: KPointParams) -> tuple:
    """Smallest admissible uniform (alpha, beta); (1, 1) when there are no entries."""
    if not params.entries:
        return 1.0, 1.0
    return (max(e.alpha for e in params.entries),
            max(e.beta for e in params.entries))
