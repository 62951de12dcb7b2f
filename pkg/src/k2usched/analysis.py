"""End-to-end analysis: service reduction, parameter derivation, every test."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from . import bounds, derivation, oracle
from ._numeric import is_integral
from .bounds import KPointParams, TestVerdict
from .presets import build_problem
from .service_curves import reduce_service
from .task_model import AnalysisProblem, Task

POLY_TESTS = ("hyperbolic", "log_utilization", "capacity", "general", "kpoint")


@dataclass
class TaskReport:
    task_id: str
    problem: AnalysisProblem
    params: Optional[KPointParams]
    verdicts: dict = field(default_factory=dict)
    refined_params: Optional[KPointParams] = None

    @property
    def tda(self) -> TestVerdict:
        return self.verdicts["tda"]

    def to_dict(self) -> dict:
        out = {
            "task": self.task_id,
            "verdicts": {name: {"schedulable": v.schedulable, "witness": v.witness,
                                "margin": v.margin}
                         for name, v in self.verdicts.items()},
        }
        for key, params in (("params", self.params), ("refined_params", self.refined_params)):
            if params is not None:
                out[key] = {
                    "t_k": params.t_k,
                    "C_k_eff": params.C_k_eff,
                    "hp2": list(params.hp2_ids),
                    "rule": params.split.rule if params.split else None,
                    "entries": [{"task": e.task_id, "t": e.t, "alpha": e.alpha,
                                 "beta": e.beta, "U": e.U} for e in params.entries],
                }
        return out


def _unknown(name):
    return TestVerdict(False, name)


def poly_verdicts(params: KPointParams, problem: AnalysisProblem, suffix: str = "") -> dict:
    """All polynomial tests on derived parameters.

    Inflation-form problems use the closed-form hyperbolic/log tests with the
    inflation caps ``alpha = sigma(1+b)``, ``beta = sigma``; jitter problems use
    the largest derived coefficients as uniform bounds.
    """
    inflation_form = problem.delta is None and not any(t.J > 0 for t in problem.hp)
    if inflation_form:
        alpha, beta = derivation.inflation_caps(problem.sigma, problem.b)
    else:
        alpha, beta = bounds.max_coefficients(params)
    out = {
        "hyperbolic": bounds.hyperbolic_test(params, alpha, beta),
        "log_utilization": bounds.log_utilization_test(params, alpha, beta),
        "capacity": bounds.capacity_test(params, alpha, beta),
        "general": bounds.general_test(params),
        "kpoint": bounds.evaluate_kpoint(params),
    }
    return {name + suffix: v for name, v in out.items()}


def analyze_problem(problem: AnalysisProblem) -> TaskReport:
    report = TaskReport(problem.task_k.id, problem, None)
    reduced = reduce_service(problem)
    if reduced is None:
        report.verdicts.update({name: _unknown(name) for name in POLY_TESTS})
    else:
        if reduced.delta is not None and is_integral(reduced.delta):
            reduced = reduced.with_(delta=None, b=float(round(reduced.delta)))
        report.params = derivation.derive(reduced)
        report.verdicts.update(poly_verdicts(report.params, reduced))
        if reduced.delta is not None:
            report.refined_params = derivation.derive_uniform_jitter_refined(reduced)
            report.verdicts.update(poly_verdicts(report.refined_params, reduced, "_refined"))
    report.verdicts["tda"] = oracle.tda_accepts(oracle.from_problem(problem))
    return report


def analyze_taskset(taskset: Sequence[Task], preset: str,
                    config: Optional[Mapping] = None) -> list:
    """One report per task, in the given (priority) order."""
    return [analyze_problem(build_problem(preset, taskset, k, config))
            for k in range(len(taskset))]


def taskset_verdicts(reports: Sequence[TaskReport]) -> dict:
    """A task set passes a test when every task passes it."""
    names = reports[0].verdicts.keys() if reports else ()
    return {name: all(r.verdicts[name].schedulable for r in reports) for name in names}
