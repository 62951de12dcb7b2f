"""Reproducible random task sets and analysis problems."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .service_curves import BoundedDelay, Segmented
from .task_model import AnalysisProblem, ModelError, Task


class InfeasibleSpec(ModelError):
    pass


@dataclass(frozen=True)
class GenSpec:
    """Parameters of one random task set.

    ``deadline_factor`` of ``None`` means implicit deadlines; a pair
    ``(lo, hi)`` draws ``D = C + f (T - C)`` with ``f`` uniform in ``[lo, hi]``.
    """

    n: int
    total_U: float
    period_range: Tuple[float, float] = (1.0, 100.0)
    deadline_factor: Optional[Tuple[float, float]] = None
    grid: float = 1e-3
    seed: int = 0

    def __post_init__(self):
        lo, hi = self.period_range
        if self.n < 1:
            raise InfeasibleSpec("n must be at least 1")
        if not 0 < self.total_U <= self.n:
            raise InfeasibleSpec("total_U must lie in (0, n]")
        if not 0 < lo <= hi:
            raise InfeasibleSpec("need 0 < T_min <= T_max")
        if not 0 < self.grid < lo:
            raise InfeasibleSpec("grid must be positive and finer than T_min")


def uunifast(rng: np.random.Generator, n: int, total: float) -> np.ndarray:
    """Uniformly distributed utilization vector summing to ``total``."""
    out = np.empty(n)
    remaining = total
    for i in range(n - 1):
        nxt = remaining * rng.random() ** (1.0 / (n - 1 - i))
        out[i] = remaining - nxt
        remaining = nxt
    out[n - 1] = remaining
    return out


def _snap_down(x, grid):
    return math.floor(x / grid + 1e-9) * grid


def _snap(x, grid):
    return round(x / grid) * grid


def generate(spec: GenSpec, rng: Optional[np.random.Generator] = None,
             max_tries: int = 1000) -> list:
    """Random task set on the ``spec.grid`` lattice.

    Utilization vectors whose rounded execution times would fall below one
    grid step are redrawn; :class:`InfeasibleSpec` is raised when that keeps
    happening.
    """
    if rng is None:
        rng = np.random.default_rng(spec.seed)
    g = spec.grid
    lo, hi = spec.period_range
    for _ in range(max_tries):
        utils = uunifast(rng, spec.n, spec.total_U)
        periods = [max(g, _snap(math.exp(x), g))
                   for x in rng.uniform(math.log(lo), math.log(hi), spec.n)]
        wcets = [_snap_down(u * T, g) for u, T in zip(utils, periods)]
        if all(C >= g * (1 - 1e-9) for C in wcets):
            break
    else:
        raise InfeasibleSpec("total_U too low for the grid: execution times round to zero")
    tasks = []
    for i, (C, T) in enumerate(zip(wcets, periods)):
        C, T = round(C, 12), round(T, 12)
        D = T
        if spec.deadline_factor is not None:
            f = rng.uniform(*spec.deadline_factor)
            D = min(T, max(C, _snap(C + f * (T - C), g)))
            D = round(D, 12)
        tasks.append(Task(f"t{i}", C=C, T=T, D=D))
    return tasks


PROBLEM_CLASSES = ("inflation", "uniform_jitter", "independent_jitter",
                   "tdma_segmented", "tdma_bounded_delay")


def random_problem(rng: np.random.Generator, kind: str, *, sigma: float = 1.0,
                   b: float = 0.0, max_hp: int = 6, grid: float = 1e-3,
                   period_range=(1.0, 50.0)) -> AnalysisProblem:
    """A random analysis problem of one of :data:`PROBLEM_CLASSES`.

    Utilizations are drawn so that a good share of instances sits near the
    schedulability boundary. All values lie on the ``grid`` lattice except
    ``sigma``, which is taken as given.
    """
    if kind not in PROBLEM_CLASSES:
        raise ValueError(f"unknown problem class {kind!r}")
    n_hp = int(rng.integers(0, max_hp + 1))
    total = float(rng.uniform(0.1, 1.0)) / sigma
    spec = GenSpec(n=n_hp + 1, total_U=min(total, n_hp + 1), period_range=period_range,
                   deadline_factor=(0.3, 1.0), grid=grid)
    tasks = generate(spec, rng)
    task_k = max(tasks, key=lambda t: t.T)
    hp = [t for t in tasks if t is not task_k]
    kw = dict(sigma=sigma, b=b)
    if kind == "uniform_jitter":
        kw["b"] = 0.0
        while True:
            delta = _snap(float(rng.uniform(0.0, 2.0)), grid)
            if 0 < delta < 2 and abs(delta - 1.0) > grid / 2:
                break
        kw["delta"] = delta
    elif kind == "independent_jitter":
        kw["b"] = 0.0
        hp = [_with_jitter(rng, t, grid) for t in hp]
    elif kind == "tdma_segmented":
        tc = _snap(float(rng.uniform(0.5, 2.0 * task_k.D)), grid)
        cap = tc / sigma
        slot = max(grid, _snap(float(rng.uniform(0.3, 1.0)) * cap, grid))
        slot = min(slot, _snap_down(cap, grid))
        kw["service"] = Segmented(tc, slot, sigma)
    elif kind == "tdma_bounded_delay":
        gamma = max(grid, _snap(float(rng.uniform(0.3, 1.0)), grid))
        t_delay = _snap(float(rng.uniform(0.0, 0.6)) * task_k.D, grid)
        kw["service"] = BoundedDelay(gamma, t_delay)
    return AnalysisProblem(task_k=task_k, hp=tuple(hp), **kw)


def _with_jitter(rng, task, grid):
    pick = rng.random()
    if pick < 0.15:
        J = 0.0
    elif pick < 0.3:
        J = task.T * float(rng.integers(1, 3))
    elif pick < 0.45:
        J = max(0.0, task.T - task.C)
    else:
        J = _snap(float(rng.uniform(0.0, 2.0)) * task.T, grid)
    return Task(task.id, task.C, task.T, task.D, task.S, round(J, 12))


def taskset_utilization(tasks: Sequence[Task]) -> float:
    return sum(t.U for t in tasks)
