"""Sporadic task model, analysis problems and priority ordering."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import TYPE_CHECKING, Iterable, Mapping, Optional, Sequence

if TYPE_CHECKING:
    from .service_curves import ServiceCurve


class ModelError(ValueError):
    """Invalid task, task set or analysis problem."""


@dataclass(frozen=True)
class Task:
    """One sporadic task.

    Attributes:
        id: identifier, unique within a task set
        C: worst-case execution time
        T: minimum inter-arrival time
        D: relative deadline (defaults to ``T``)
        S: maximum self-suspension time
        J: maximum release jitter
    """

    id: str
    C: float
    T: float
    D: Optional[float] = None
    S: float = 0.0
    J: float = 0.0

    def __post_init__(self):
        if self.D is None:
            object.__setattr__(self, "D", self.T)
        if not (self.C > 0 and self.T > 0 and self.D > 0):
            raise ModelError(f"task {self.id!r}: C, T and D must be positive")
        if self.S < 0 or self.J < 0:
            raise ModelError(f"task {self.id!r}: S and J must be non-negative")

    @property
    def U(self) -> float:
        return self.C / self.T

    def to_dict(self) -> dict:
        d = {"id": self.id, "C": self.C, "T": self.T, "D": self.D}
        if self.S:
            d["S"] = self.S
        if self.J:
            d["J"] = self.J
        return d


@dataclass(frozen=True)
class AnalysisProblem:
    """Schedulability question for ``task_k`` against its higher-priority tasks.

    ``b_overrides`` maps task ids to a per-task inflation replacing ``b``;
    the segmented-service reduction uses it for its uninflated virtual task.
    ``delta`` selects the uniform-jitter test (jitter ``delta * T_i`` for every
    higher-priority task). Release jitter carried by the tasks themselves
    (``Task.J``) selects the independent-jitter test.
    """

    task_k: Task
    hp: tuple = ()
    sigma: float = 1.0
    b: float = 0.0
    service: Optional["ServiceCurve"] = None
    extra_Ck: float = 0.0
    delta: Optional[float] = None
    b_overrides: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "hp", tuple(self.hp))
        ids = [t.id for t in self.hp]
        if len(set(ids)) != len(ids):
            raise ModelError("duplicate task ids in higher-priority set")
        if self.task_k.id in ids:
            raise ModelError("task under analysis appears in its own hp set")
        if not self.sigma > 0:
            raise ModelError("sigma must be positive")
        if self.b < 0 or self.extra_Ck < 0:
            raise ModelError("b and extra_Ck must be non-negative")
        if self.delta is not None:
            if self.delta < 0:
                raise ModelError("delta must be non-negative")
            if self.b != 0 or self.b_overrides:
                raise ModelError("inflation and uniform jitter cannot be combined")

    @property
    def horizon(self) -> float:
        return self.task_k.D

    @property
    def base_C(self) -> float:
        """Execution demand of the task under analysis, add-ons included."""
        return self.task_k.C + self.extra_Ck

    def inflation(self, task: Task) -> float:
        return self.b_overrides.get(task.id, self.b)

    def with_(self, **changes) -> "AnalysisProblem":
        return replace(self, **changes)


def classify(taskset: Sequence[Task]) -> str:
    """Return ``'implicit'``, ``'constrained'`` or ``'arbitrary'``."""
    if not taskset:
        raise ModelError("empty task set")
    if all(t.D == t.T for t in taskset):
        return "implicit"
    if all(t.D <= t.T for t in taskset):
        return "constrained"
    return "arbitrary"


_POLICY_KEYS = {
    "RM": lambda t: (t.T, t.C, t.id),
    "DM": lambda t: (t.D, t.C, t.id),
}


def assign_priorities(taskset: Iterable[Task], policy: str = "RM") -> list:
    """Order tasks highest priority first.

    Ties on the policy key are broken by smaller C, then by id.
    ``policy='as_given'`` keeps the input order.
    """
    tasks = list(taskset)
    if policy == "as_given":
        return tasks
    try:
        key = _POLICY_KEYS[policy]
    except KeyError:
        raise ModelError(f"unknown priority policy {policy!r}") from None
    return sorted(tasks, key=key)


def task_from_dict(d: Mapping) -> Task:
    try:
        return Task(
            id=str(d["id"]),
            C=float(d["C"]),
            T=float(d["T"]),
            D=float(d["D"]) if d.get("D") is not None else None,
            S=float(d.get("S", 0.0)),
            J=float(d.get("J", 0.0)),
        )
    except KeyError as e:
        raise ModelError(f"task entry missing field {e.args[0]!r}") from None


def load_taskset(text: str) -> list:
    """Parse the JSON task-set schema ``{"tasks": [{"id", "C", "T", "D"?, "S"?, "J"?}]}``."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelError(f"malformed JSON: {e}") from None
    if not isinstance(doc, dict) or not isinstance(doc.get("tasks"), list):
        raise ModelError('expected an object with a "tasks" list')
    tasks = [task_from_dict(d) for d in doc["tasks"]]
    ids = [t.id for t in tasks]
    if len(set(ids)) != len(ids):
        raise ModelError("duplicate task ids")
    return tasks


def dump_taskset(tasks: Iterable[Task]) -> str:
    return json.dumps({"tasks": [t.to_dict() for t in tasks]}, indent=2)
