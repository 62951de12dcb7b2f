"""Minimum-service curves and their reduction to constant-inflation form."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from ._numeric import ceil_snap, floor_snap
from .task_model import AnalysisProblem, ModelError, Task

VIRTUAL_TASK_ID = "__tdma_virtual__"


@dataclass(frozen=True)
class Identity:
    """Full processor: A(t) = t."""


@dataclass(frozen=True)
class Segmented:
    """Segmented TDMA approximation, sigma_s * C_slot service per cycle.

    The curve dips below zero right after each cycle boundary and is
    deliberately left unclamped.
    """

    T_cycle: float
    C_slot: float
    sigma_s: float = 1.0

    def __post_init__(self):
        if not (self.T_cycle > 0 and self.C_slot > 0 and self.sigma_s > 0):
            raise ModelError("segmented curve: T_cycle, C_slot, sigma_s must be positive")
        if self.T_cycle - self.sigma_s * self.C_slot < 0:
            raise ModelError("segmented curve: sigma_s * C_slot exceeds T_cycle")


@dataclass(frozen=True)
class BoundedDelay:
    """Constant slope ``gamma`` after an initial delay ``t_delay``."""

    gamma: float
    t_delay: float = 0.0

    def __post_init__(self):
        if not 0 < self.gamma <= 1:
            raise ModelError("bounded-delay curve: gamma must lie in (0, 1]")
        if self.t_delay < 0:
            raise ModelError("bounded-delay curve: t_delay must be non-negative")

    @classmethod
    def from_tdma(cls, T_cycle: float, C_slot: float, sigma: float = 1.0) -> "BoundedDelay":
        """Linear lower bound of a TDMA slot: rate C_slot/T_cycle after a delay of T_cycle - C_slot."""
        return cls(gamma=sigma * C_slot / T_cycle, t_delay=T_cycle - sigma * C_slot)


@dataclass(frozen=True)
class ExactTDMA:
    """Exact TDMA supply bound. Only the demand oracle consumes this curve."""

    T_cycle: float
    C_slot: float

    def __post_init__(self):
        if not (self.T_cycle > 0 and 0 < self.C_slot <= self.T_cycle):
            raise ModelError("exact TDMA: need 0 < C_slot <= T_cycle")


ServiceCurve = Union[Identity, Segmented, BoundedDelay, ExactTDMA]

IDENTITY = Identity()


def service_value(curve: Optional[ServiceCurve], t: float) -> float:
    if not t > 0:
        raise ValueError("service curves are defined for t > 0 only")
    if curve is None or isinstance(curve, Identity):
        return t
    if isinstance(curve, Segmented):
        return t - ceil_snap(t / curve.T_cycle) * (curve.T_cycle - curve.sigma_s * curve.C_slot)
    if isinstance(curve, BoundedDelay):
        return max(0.0, curve.gamma * (t - curve.t_delay))
    if isinstance(curve, ExactTDMA):
        n = t / curve.T_cycle
        return max(floor_snap(n) * curve.C_slot,
                   t - ceil_snap(n) * (curve.T_cycle - curve.C_slot))
    raise TypeError(f"unknown service curve {curve!r}")


def is_identity(curve) -> bool:
    return curve is None or isinstance(curve, Identity)


def reduce_segmented(problem: AnalysisProblem) -> AnalysisProblem:
    """Fold a segmented service curve into a virtual higher-priority task.

    The virtual task has period ``T_cycle`` and execution time
    ``(T_cycle - sigma_s * C_slot) / sigma``. When ``b > 0`` and the task under
    analysis is large enough, the virtual task is inflated like every other
    task and the task's own demand is reduced by the same amount; otherwise
    the virtual task is exempt from inflation.
    """
    curve = problem.service
    if not isinstance(curve, Segmented):
        raise ModelError("reduce_segmented needs a segmented service curve")
    if problem.delta is not None:
        raise ModelError("segmented reduction is defined for the inflation test only")
    c_virtual = (curve.T_cycle - curve.sigma_s * curve.C_slot) / problem.sigma
    if c_virtual < 0:
        raise ModelError("virtual task would have negative execution time")
    if c_virtual == 0:
        return problem.with_(service=IDENTITY)
    virtual = Task(VIRTUAL_TASK_ID, C=c_virtual, T=curve.T_cycle)
    hp = problem.hp + (virtual,)
    shift = problem.sigma * problem.b * c_virtual
    base = problem.base_C
    if problem.b > 0 and base - shift > 0:
        # inflated virtual task, demand moved out of the task under analysis
        return _with_base(problem, base - shift).with_(hp=hp, service=IDENTITY)
    overrides = dict(problem.b_overrides)
    overrides[VIRTUAL_TASK_ID] = 0.0
    return problem.with_(hp=hp, service=IDENTITY, b_overrides=overrides)


def reduce_bounded_delay(problem: AnalysisProblem) -> Optional[AnalysisProblem]:
    """Rescale a bounded-delay test into the full-service inflation form.

    Returns ``None`` when ``t_delay >= D_k``: no instant in the analysis
    window receives any service, so the test cannot succeed.
    """
    curve = problem.service
    if not isinstance(curve, BoundedDelay):
        raise ModelError("reduce_bounded_delay needs a bounded-delay service curve")
    if problem.delta is not None:
        raise ModelError("bounded-delay reduction is defined for the inflation test only")
    if curve.t_delay >= problem.horizon:
        return None
    g = curve.gamma
    base = (problem.base_C + g * curve.t_delay) / g
    return _with_base(problem, base).with_(sigma=problem.sigma / g, service=IDENTITY)


def _with_base(problem: AnalysisProblem, base: float) -> AnalysisProblem:
    """Set C_k + extra_Ck to ``base`` by adjusting extra_Ck, or C_k when base < C_k."""
    C = problem.task_k.C
    if base >= C:
        return problem.with_(extra_Ck=base - C)
    task = Task(problem.task_k.id, C=base, T=problem.task_k.T, D=problem.task_k.D,
                S=problem.task_k.S, J=problem.task_k.J)
    return problem.with_(task_k=task, extra_Ck=0.0)


def reduce_service(problem: AnalysisProblem) -> Optional[AnalysisProblem]:
    """Dispatch to the matching reduction; identity service passes through."""
    curve = problem.service
    if is_identity(curve):
        return problem
    if isinstance(curve, Segmented):
        return reduce_segmented(problem)
    if isinstance(curve, BoundedDelay):
        return reduce_bounded_delay(problem)
    raise ModelError(f"{type(curve).__name__} has no closed-form reduction")


def tdma_bandwidth(T_cycle: float, C_slot: float) -> float:
    return C_slot / T_cycle


