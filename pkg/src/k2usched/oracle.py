"""Pseudo-polynomial time-demand analysis used as ground truth.

The oracle evaluates the original (unreduced) test form

    exists 0 < t <= horizon:  C + sum_i sigma_i (ceil((t + J_i)/T_i) C_i + b_i C_i) <= A(t)

at every point where the demand is about to step up, plus the breakpoints of
the service curve. It accepts with a ``+ORACLE_TOL`` margin so that it can
only over-accept relative to the polynomial tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._numeric import EPS, ceil_snap, ceil_snap_array
from .bounds import TestVerdict
from .service_curves import (BoundedDelay, ExactTDMA, Identity, Segmented,
                             ServiceCurve, service_value)
from .task_model import AnalysisProblem

ORACLE_TOL = 1e-9


@dataclass(frozen=True)
class DemandTerm:
    C: float
    T: float
    J: float = 0.0
    b: float = 0.0
    sigma: float = 1.0


@dataclass(frozen=True)
class GeneralizedTest:
    C_k_eff: float
    terms: tuple
    service: Optional[ServiceCurve]
    horizon: float

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if not self.horizon > 0:
            raise ValueError("horizon must be positive")

    def demand(self, t: float) -> float:
        return self.C_k_eff + sum(
            d.sigma * (ceil_snap((t + d.J) / d.T) * d.C + d.b * d.C) for d in self.terms)


def from_problem(problem: AnalysisProblem, delta: Optional[float] = None) -> GeneralizedTest:
    """The unreduced test a problem stands for.

    ``delta`` (or ``problem.delta``) gives every higher-priority task jitter
    ``delta * T_i``; otherwise each task's own ``J`` is used.
    """
    if delta is None:
        delta = problem.delta
    terms = []
    for task in problem.hp:
        J = delta * task.T if delta is not None else task.J
        terms.append(DemandTerm(task.C, task.T, J, problem.inflation(task), problem.sigma))
    return GeneralizedTest(problem.base_C, terms, problem.service, problem.horizon)


def _cycle(service):
    if isinstance(service, (Segmented, ExactTDMA)):
        return service.T_cycle
    return None


def candidate_points(test: GeneralizedTest) -> np.ndarray:
    """Right end points of the constant-demand intervals in (0, horizon]."""
    H = test.horizon
    pts = [np.array([H])]
    for d in test.terms:
        m_lo = max(1, math.floor((d.J + EPS) / d.T))
        m_hi = math.floor((H + d.J) / d.T + EPS * max(1.0, (H + d.J) / d.T))
        if m_hi >= m_lo:
            p = np.arange(m_lo, m_hi + 1) * d.T - d.J
            pts.append(p[(p > EPS) & (p <= H + EPS * max(1.0, H))])
    tc = _cycle(test.service)
    if tc is not None:
        n = math.floor(H / tc + EPS * max(1.0, H / tc))
        pts.append(np.arange(1, n + 1) * tc)
    allp = np.minimum(np.concatenate(pts), H)
    allp = np.unique(allp)
    # merge points closer than the snapping tolerance
    keep = np.concatenate(([True], np.diff(allp) > EPS * np.maximum(1.0, allp[1:])))
    return allp[keep]


def _service_array(service, t):
    if service is None or isinstance(service, Identity):
        return t
    if isinstance(service, Segmented):
        return t - ceil_snap_array(t / service.T_cycle) * (service.T_cycle - service.sigma_s * service.C_slot)
    if isinstance(service, BoundedDelay):
        return np.maximum(0.0, service.gamma * (t - service.t_delay))
    if isinstance(service, ExactTDMA):
        n = t / service.T_cycle
        fl = np.floor(n + EPS * np.maximum(1.0, np.abs(n)))
        return np.maximum(fl * service.C_slot, t - ceil_snap_array(n) * (service.T_cycle - service.C_slot))
    return np.array([service_value(service, x) for x in t])


def demand_array(test: GeneralizedTest, t: np.ndarray) -> np.ndarray:
    total = np.full_like(t, test.C_k_eff, dtype=float)
    for d in test.terms:
        total += d.sigma * (ceil_snap_array((t + d.J) / d.T) * d.C + d.b * d.C)
    return total


def tda_accepts(test: GeneralizedTest) -> TestVerdict:
    """Exact demand check at the candidate points; witness is the first passing time."""
    t = candidate_points(test)
    slack = _service_array(test.service, t) - demand_array(test, t)
    ok = np.nonzero(slack >= -ORACLE_TOL)[0]
    if ok.size:
        i = ok[0]
        return TestVerdict(True, "tda", witness=float(t[i]), margin=float(slack[i]))
    return TestVerdict(False, "tda", margin=float(slack.max()))


def dense_grid_accepts(test: GeneralizedTest, steps: int = 100_000) -> bool:
    """Brute-force check on a uniform grid of ``steps`` points in (0, horizon].

    Plain ceilings are used on purpose, so this path shares no rounding
    logic with :func:`tda_accepts`.
    """
    H = test.horizon
    t = np.arange(1, steps + 1) * (H / steps)
    demand = np.full_like(t, test.C_k_eff)
    for d in test.terms:
        demand += d.sigma * (np.ceil((t + d.J) / d.T) * d.C + d.b * d.C)
    s = test.service
    if s is None or isinstance(s, Identity):
        supply = t
    elif isinstance(s, Segmented):
        supply = t - np.ceil(t / s.T_cycle) * (s.T_cycle - s.sigma_s * s.C_slot)
    elif isinstance(s, BoundedDelay):
        supply = np.maximum(0.0, s.gamma * (t - s.t_delay))
    else:
        supply = np.maximum(np.floor(t / s.T_cycle) * s.C_slot,
                            t - np.ceil(t / s.T_cycle) * (s.T_cycle - s.C_slot))
    return bool(np.any(demand - supply <= ORACLE_TOL))


def wcrt_fixed_point(task_k, hp, horizon: Optional[float] = None) -> Optional[float]:
    """Least fixed point of ``R = C_k + sum ceil(R/T_i) C_i``; ``None`` once R passes ``horizon``."""
    if horizon is None:
        horizon = task_k.D
    R = task_k.C
    while True:
        nxt = task_k.C + sum(ceil_snap(R / t.T) * t.C for t in hp)
        if nxt > horizon + ORACLE_TOL:
            return None
        if abs(nxt - R) <= EPS * max(1.0, R):
            return nxt
        R = nxt
