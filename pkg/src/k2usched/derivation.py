"""Automatic derivation of k-point parameters.

Each derivation splits the higher-priority tasks into ``hp1`` (tasks that can
release another job inside the analysis window; each gets a test point at
its last release before the deadline) and ``hp2`` (tasks whose interference
is constant over the window and is folded into ``C_k_eff``).
"""

from __future__ import annotations

import math

from ._numeric import _slack, ceil_snap, floor_snap, is_integral
from .bounds import KPointEntry, KPointParams, SplitRecord, TestVerdict
from .service_curves import is_identity
from .task_model import AnalysisProblem, ModelError


def _require_identity(problem):
    if not is_identity(problem.service):
        raise ModelError("reduce the service curve before deriving parameters")


def _require_constrained(problem):
    tk = problem.task_k
    if tk.D > tk.T:
        raise ModelError("constrained-deadline required")


def _build(problem, base, rows, hp2, rule):
    """rows: (task, t_i, alpha_i, beta_i); sorted by (t_i, T_i, id)."""
    if not base > 0:
        raise ModelError("effective execution time must be positive")
    D = problem.horizon
    # a point that is D_k up to rounding (e.g. (D_k + J_i)/T_i integral) is D_k
    rows = [(task, D if D < t <= D + _slack(D) else t, a, b) for task, t, a, b in rows]
    rows = sorted(rows, key=lambda r: (r[1], r[0].T, r[0].id))
    entries = [KPointEntry(task.id, t, a, b, task.U) for task, t, a, b in rows]
    split = SplitRecord(tuple(r[0].id for r in rows), tuple(t.id for t in hp2), rule)
    return KPointParams(t_k=problem.horizon, C_k_eff=base, entries=entries,
                        hp2_ids=split.hp2, split=split)


def derive_constant_inflation(problem: AnalysisProblem) -> KPointParams:
    """Parameters for ``C_k + sum sigma (ceil(t/T_i) C_i + b C_i) <= t``.

    Tasks with ``T_i >= D_k`` go to hp2; the rest get ``g_i = ceil(D_k/T_i) - 1``,
    ``t_i = g_i T_i``, ``alpha_i = sigma (g_i + b_i) / g_i``, ``beta_i = sigma / g_i``.
    """
    _require_identity(problem)
    _require_constrained(problem)
    if problem.delta is not None:
        raise ModelError("problem carries uniform jitter; use derive_uniform_jitter")
    s, D = problem.sigma, problem.horizon
    base = problem.base_C
    rows, hp2 = [], []
    for task in problem.hp:
        b = problem.inflation(task)
        if task.T >= D:
            hp2.append(task)
            base += s * (1.0 + b) * task.C
            continue
        g = ceil_snap(D / task.T) - 1
        rows.append((task, g * task.T, s * ((g + b) / g), s / g))
    return _build(problem, base, rows, hp2, "period_vs_Dk")


def corollary1_tests(problem: AnalysisProblem) -> tuple:
    """Hyperbolic and logarithmic closed forms of the constant-inflation test.

    Uses the coefficient caps ``alpha = sigma (1 + b)`` and ``beta = sigma``.
    Returns ``(hyperbolic_verdict, log_verdict)``.
    """
    params = derive_constant_inflation(problem)
    b, s = problem.b, problem.sigma
    ratio = params.ratio
    prod = math.prod(s * e.U + 1.0 for e in params.entries)
    m8 = (2.0 + b) - (ratio + 1.0 + b) * prod
    total_u = sum(e.U for e in params.entries)
    m9 = math.log((2.0 + b) / (ratio + 1.0 + b)) - s * total_u
    return (TestVerdict(m8 >= 0, "hyperbolic", margin=m8),
            TestVerdict(m9 >= 0, "log_utilization", margin=m9))


def inflation_caps(sigma: float, b: float) -> tuple:
    return sigma * (1.0 + b), sigma


def uniform_jitter_caps(sigma: float, delta: float, refined: bool = False) -> tuple:
    """Upper bounds on alpha_i, beta_i for the (refined) uniform-jitter split."""
    g = ceil_snap(delta) + (1 if refined else 0)
    return sigma * (g / (g - delta)), sigma / (g - delta)


def _jitter_delta(problem, delta):
    if delta is None:
        delta = problem.delta
    if delta is None or delta < 0:
        raise ModelError("uniform jitter needs delta >= 0")
    if problem.b != 0 or problem.b_overrides:
        raise ModelError("inflation and uniform jitter cannot be combined")
    return delta


def derive_uniform_jitter(problem: AnalysisProblem, delta=None) -> KPointParams:
    """Parameters for ``C_k + sum sigma ceil((t + delta T_i)/T_i) C_i <= t``, delta non-integral.

    hp2 holds tasks with ``ceil(D_k/T_i + delta) == ceil(delta)``, each adding
    ``sigma ceil(delta) C_i``. For hp1, ``g_i = floor(D_k/T_i + delta)``,
    ``t_i = (g_i - delta) T_i``, ``alpha_i = sigma g_i/(g_i - delta)`` and
    ``beta_i = sigma/(g_i - delta)``.
    """
    delta = _jitter_delta(problem, delta)
    if is_integral(delta):
        raise ModelError("integral delta: use constant-inflation path")
    return _uniform_jitter(problem, delta, refined=False)


def derive_uniform_jitter_refined(problem: AnalysisProblem, delta=None) -> KPointParams:
    """Uniform jitter with hp2 widened to ``ceil(D_k/T_i + delta) <= ceil(delta) + 1``.

    Tasks moved to hp2 contribute ``sigma ceil(D_k/T_i + delta) C_i``, which
    keeps every remaining ``g_i > delta + 1`` and the coefficients bounded
    even when delta sits just below an integer.
    """
    delta = _jitter_delta(problem, delta)
    if is_integral(delta):
        raise ModelError("integral delta: use constant-inflation path")
    return _uniform_jitter(problem, delta, refined=True)


def _uniform_jitter(problem, delta, refined):
    _require_identity(problem)
    _require_constrained(problem)
    s, D = problem.sigma, problem.horizon
    cd = ceil_snap(delta)
    base = problem.base_C
    rows, hp2 = [], []
    for task in problem.hp:
        q = D / task.T + delta
        n = ceil_snap(q)
        if (n <= cd + 1) if refined else (n == cd):
            hp2.append(task)
            base += s * (n if refined else cd) * task.C
            continue
        g = floor_snap(q)
        t = (g - delta) * task.T
        if not t > 0:
            raise AssertionError(f"non-positive test point for {task.id!r}")
        rows.append((task, t, s * (g / (g - delta)), s / (g - delta)))
    rule = "jitter_ceiling_refined" if refined else "jitter_ceiling"
    return _build(problem, base, rows, hp2, rule)


def derive_independent_jitter(problem: AnalysisProblem) -> KPointParams:
    """Parameters for ``C_k + sum sigma ceil((t + J_i)/T_i) C_i <= t``.

    For hp1, ``g_i = floor((D_k + J_i)/T_i)``, ``t_i = g_i T_i - J_i``,
    ``alpha_i = sigma g_i/(g_i - J_i/T_i)``, ``beta_i = sigma/(g_i - J_i/T_i)``.

    When ``J_i/T_i`` is an integer the window (0, D_k] can open right after a
    release, so the job count just after 0 is ``J_i/T_i + 1`` and the last
    release strictly before D_k is used (``g_i = ceil((D_k + J_i)/T_i) - 1``).
    With ``J_i = 0`` this reproduces the constant-inflation parameters.
    """
    _require_identity(problem)
    if problem.delta is not None:
        raise ModelError("problem carries uniform jitter; use derive_uniform_jitter")
    if problem.b != 0 or problem.b_overrides:
        raise ModelError("inflation and independent jitter cannot be combined")
    _require_constrained(problem)
    s, D = problem.sigma, problem.horizon
    base = problem.base_C
    rows, hp2 = [], []
    for task in problem.hp:
        J = task.J
        if J is None:
            raise ModelError(f"task {task.id!r} has no jitter")
        r = J / task.T
        q = (D + J) / task.T
        integral = is_integral(r)
        first = (round(r) + 1) if integral else ceil_snap(r)
        if ceil_snap(q) <= first:
            hp2.append(task)
            base += s * first * task.C
            continue
        g = ceil_snap(q) - 1 if integral else floor_snap(q)
        t = g * task.T - J
        rows.append((task, t, s * (g / (g - r)), s / (g - r)))
    return _build(problem, base, rows, hp2, "independent_jitter")


def derive(problem: AnalysisProblem) -> KPointParams:
    """Pick the derivation matching an identity-service problem.

    Integral ``delta`` is routed to constant inflation with ``b = delta``.
    """
    if problem.delta is not None:
        if is_integral(problem.delta):
            return derive_constant_inflation(
                problem.with_(delta=None, b=float(round(problem.delta))))
        return derive_uniform_jitter(problem)
    if any(t.J > 0 for t in problem.hp):
        return derive_independent_jitter(problem)
    return derive_constant_inflation(problem)
