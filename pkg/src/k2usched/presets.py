"""Named platform/task-model scenarios mapped onto analysis problems."""

from __future__ import annotations

import math
from dataclasses import replace
from typing import Mapping, Optional, Sequence

from .bounds import TestVerdict
from .service_curves import BoundedDelay, Segmented
from .task_model import AnalysisProblem, ModelError, Task

PRESETS = (
    "uni_preemptive",
    "uni_nonpreemptive",
    "bursty",
    "mp_global",
    "mp_partitioned",
    "tdma_segmented",
    "tdma_bounded_delay",
    "self_suspending_uni",
)

# config keys each preset cannot do without
REQUIRED = {
    "bursty": ("b_burst",),
    "mp_global": ("M",),
    "mp_partitioned": ("M",),
    "tdma_segmented": ("T_cycle", "C_slot"),
}


class PresetError(ModelError):
    pass


def _need(config, key, preset):
    value = config.get(key)
    if value is None:
        raise PresetError(f"preset {preset!r} requires config field {key!r}")
    return value


def build_problem(preset: str, taskset: Sequence[Task], k_index: int,
                  config: Optional[Mapping] = None) -> AnalysisProblem:
    """Analysis problem for ``taskset[k_index]``, the set being priority-ordered.

    Generic config keys: ``extra_Ck`` (added demand, e.g. an equivalent DAG
    execution time), ``sigma``/``b`` (override the preset's values) and
    ``delta`` (uniform release jitter).
    """
    config = dict(config or {})
    if preset not in PRESETS:
        raise PresetError(f"unknown preset {preset!r}")
    if not 0 <= k_index < len(taskset):
        raise PresetError(f"k_index {k_index} out of range")
    for key in REQUIRED.get(preset, ()):
        _need(config, key, preset)

    task_k = taskset[k_index]
    hp = list(taskset[:k_index])
    lp = taskset[k_index + 1:]
    sigma, b, extra, service = 1.0, 0.0, float(config.get("extra_Ck") or 0.0), None

    if preset == "uni_nonpreemptive":
        extra += max((t.C for t in lp), default=0.0)
    elif preset == "bursty":
        b = float(config["b_burst"])
        extra += task_k.S
    elif preset == "mp_global":
        sigma, b = 1.0 / config["M"], 1.0
    elif preset == "mp_partitioned":
        sigma = 1.0 / config["M"]
    elif preset == "tdma_segmented":
        service = Segmented(config["T_cycle"], config["C_slot"], config.get("sigma_s", 1.0))
    elif preset == "tdma_bounded_delay":
        if config.get("gamma") is not None:
            service = BoundedDelay(config["gamma"], config.get("t_delay") or 0.0)
        elif config.get("T_cycle") is not None and config.get("C_slot") is not None:
            service = BoundedDelay.from_tdma(config["T_cycle"], config["C_slot"])
        else:
            raise PresetError("preset 'tdma_bounded_delay' requires config field 'gamma' "
                              "(or 'T_cycle' and 'C_slot')")
    elif preset == "self_suspending_uni":
        extra += task_k.S
        # analysis window is the period; hp tasks suffer jitter T_i - C_i
        task_k = replace(task_k, D=task_k.T)
        hp = [replace(t, J=t.T - t.C) for t in hp]

    if config.get("sigma") is not None:
        sigma = float(config["sigma"])
    if config.get("b") is not None:
        b = float(config["b"])
    return AnalysisProblem(task_k=task_k, hp=tuple(hp), sigma=sigma, b=b,
                           service=service, extra_Ck=extra, delta=config.get("delta"))


def tdma_rm_closed_forms(taskset: Sequence[Task], k_index: int,
                         T_cycle: float, C_slot: float) -> tuple:
    """Closed-form RM tests of an implicit-deadline set served by a TDMA slot.

    Returns ``(segmented_verdict, bounded_delay_verdict)``. The segmented
    verdict uses the all-tasks product form when ``T_cycle < T_k`` and the
    form with the cycle absorbed into the task under analysis otherwise.
    """
    if any(t.D != t.T for t in taskset):
        raise ModelError("closed forms need implicit deadlines")
    tk = taskset[k_index]
    hp = taskset[:k_index]
    gamma = C_slot / T_cycle
    prod_hp = math.prod(t.U + 1.0 for t in hp)
    if T_cycle < tk.T:
        lhs, rhs = prod_hp * (tk.U + 1.0), 2.0 / (2.0 - gamma)
        seg = TestVerdict(lhs <= rhs, "tdma_segmented_small_cycle", margin=rhs - lhs)
    else:
        rhs = 2.0 / (1.0 + tk.U + (T_cycle / tk.T) * (1.0 - gamma))
        seg = TestVerdict(prod_hp <= rhs, "tdma_segmented_large_cycle", margin=rhs - prod_hp)
    t_delay = T_cycle - C_slot
    lhs = ((tk.C + gamma * t_delay) / (gamma * tk.T) + 1.0) * math.prod(
        t.U / gamma + 1.0 for t in hp)
    bd = TestVerdict(lhs <= 2.0, "tdma_bounded_delay", margin=2.0 - lhs)
    return seg, bd


def tdma_utilization_bound(k: int, gamma: float) -> float:
    """Total-utilization bound ``k((2/(2-gamma))^(1/k) - 1)`` for the small-cycle case."""
    return k * math.expm1(math.log(2.0 / (2.0 - gamma)) / k)
