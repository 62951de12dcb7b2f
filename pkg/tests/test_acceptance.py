"""Acceptance suite: one test per acceptance criterion.

Each test prints a single PASS/FAIL line (also repeated in the terminal
summary) and then asserts. Run with ``pytest tests/test_acceptance.py -v``.
"""

import math
import time

import numpy as np
import pytest

from _acceptance_log import record
from _exact import majorization_violations
from k2usched import taskgen
from k2usched.analysis import analyze_problem
from k2usched.bounds import capacity_rhs, capacity_test, evaluate_kpoint, general_test
from k2usched.derivation import (corollary1_tests, derive_constant_inflation,
                                 derive_independent_jitter, derive_uniform_jitter,
                                 inflation_caps, uniform_jitter_caps)
from k2usched.oracle import dense_grid_accepts, from_problem, tda_accepts
from k2usched.presets import tdma_utilization_bound
from k2usched.service_curves import BoundedDelay, ExactTDMA, Segmented, reduce_service, service_value
from k2usched.task_model import AnalysisProblem, Task

PER_CLASS = 10_000
SEED = 7


def _classes():
    """(label, kind, sigma, b) cells; every cell gets PER_CLASS problems."""
    cells = [(f"inflation s={s} b={b}", "inflation", s, b)
             for s in (1.0, 0.5, 0.25) for b in (0.0, 1.0)]
    cells += [("uniform_jitter", "uniform_jitter", None, 0.0),
              ("independent_jitter", "independent_jitter", None, 0.0),
              ("tdma_segmented", "tdma_segmented", None, None),
              ("tdma_bounded_delay", "tdma_bounded_delay", None, None)]
    return cells


def _build_pool():
    rng = np.random.default_rng(SEED)
    pool = []
    for label, kind, sigma, b in _classes():
        for i in range(PER_CLASS):
            s = sigma if sigma is not None else (1.0, 0.5, 0.25)[i % 3]
            bb = b if b is not None else float(i % 2)
            pool.append((label, taskgen.random_problem(rng, kind, sigma=s, b=bb)))
    return pool


class Evaluated:
    """Every derived parameter set and polynomial verdict for one problem."""

    def __init__(self, problem):
        self.problem = problem
        self.reduced = reduce_service(problem)
        self.params = []        # (params, delta, caps)
        self.poly = {}
        self.report = analyze_problem(problem)
        # exact test on the original (unreduced) problem
        self.oracle = self.report.verdicts["tda"]
        r = self.reduced
        if r is None:
            return
        if r.delta is None and not any(t.J > 0 for t in r.hp):
            self.params.append((self.report.params, None, inflation_caps(r.sigma, r.b)))
            hyp, log = corollary1_tests(r)
            self.poly["closed_hyperbolic"], self.poly["closed_log"] = hyp, log
        elif r.delta is not None:
            self.params.append((self.report.params, r.delta,
                                uniform_jitter_caps(r.sigma, r.delta)))
            self.params.append((self.report.refined_params, r.delta,
                                uniform_jitter_caps(r.sigma, r.delta, refined=True)))
        else:
            self.params.append((self.report.params, None, None))
        for i, (params, _, _) in enumerate(self.params):
            self.poly[f"general[{i}]"] = general_test(params)
            self.poly[f"kpoint[{i}]"] = evaluate_kpoint(params)
        for name, v in self.report.verdicts.items():
            if name != "tda":
                self.poly[name] = v


@pytest.fixture(scope="module")
def evaluated():
    start = time.perf_counter()
    items = [(label, Evaluated(p)) for label, p in _build_pool()]
    return items, time.perf_counter() - start


def test_criterion_1_liu_layland():
    start = time.perf_counter()
    expected = {2: 0.828427, 10: 0.717735}
    got = {}
    ok = True
    for k, value in expected.items():
        # k implicit-deadline RM tasks with T_i in (T_k/2, T_k): one point each
        hp = tuple(Task(f"t{i}", 0.01, 10 + i) for i in range(k - 1))
        prob = AnalysisProblem(Task("k", 0.01, 19.5), hp)
        params = derive_constant_inflation(prob)
        alpha, beta = inflation_caps(1.0, 0.0)
        rhs = capacity_rhs(params.k, alpha, beta)
        got[k] = rhs
        ok &= params.k == k and abs(rhs - value) < 1e-6
        # the verdict flips at the bound
        u = rhs / k * (1 - 1e-6)
        lo = AnalysisProblem(Task("k", u * 19.5, 19.5),
                             tuple(Task(t.id, u * t.T, t.T) for t in hp))
        u = rhs / k * (1 + 1e-6)
        hi = AnalysisProblem(Task("k", u * 19.5, 19.5),
                             tuple(Task(t.id, u * t.T, t.T) for t in hp))
        ok &= capacity_test(derive_constant_inflation(lo), alpha, beta).schedulable
        ok &= not capacity_test(derive_constant_inflation(hi), alpha, beta).schedulable
    big = capacity_rhs(10 ** 6, *inflation_caps(1.0, 0.0))
    ok &= abs(big - math.log(2)) < 1e-5
    elapsed = time.perf_counter() - start
    ok &= elapsed < 1.0
    assert record(1, "Liu-Layland bound from capacity test", ok,
                  f"k=2 {got[2]:.6f}, k=10 {got[10]:.6f}, k=1e6 {big:.6f} vs ln2, "
                  f"{elapsed * 1e3:.1f} ms")


def test_criterion_2_tdma_bound():
    start = time.perf_counter()
    value = tdma_utilization_bound(10 ** 6, 0.4)
    elapsed = time.perf_counter() - start
    ok = abs(value - math.log(1.25)) < 1e-5 and elapsed < 1.0
    assert record(2, "TDMA utilization bound limit", ok,
                  f"k=1e6 gives {value:.6f}, ln(1.25)={math.log(1.25):.6f}, "
                  f"{elapsed * 1e3:.2f} ms")


def test_criterion_3_dominance(evaluated):
    items, elapsed = evaluated
    bad = []
    accepts = {}
    counts = {}
    for label, ev in items:
        counts[label] = counts.get(label, 0) + 1
        for name, v in ev.poly.items():
            if v.schedulable:
                accepts[label] = accepts.get(label, 0) + 1
                if not ev.oracle.schedulable:
                    bad.append((label, name, ev.problem))
    ok = (not bad and elapsed < 60.0 and min(counts.values()) >= PER_CLASS
          and all(accepts.get(label, 0) > 0 for label in counts))
    assert record(3, "polynomial accept implies oracle accept", ok,
                  f"{len(items)} problems in {len(counts)} classes, {len(bad)} violations, "
                  f"{elapsed:.1f} s"), bad[:3]


def test_criterion_4_majorization(evaluated):
    items, _ = evaluated
    bad = []
    checked = 0
    for label, ev in items:
        for params, delta, _ in ev.params:
            checked += 1
            if majorization_violations(ev.reduced, params, delta):
                bad.append((label, ev.problem))
    assert record(4, "k-point bound majorizes demand at every point", not bad,
                  f"{checked} parameter sets, {len(bad)} violations"), bad[:3]


def test_criterion_5_caps(evaluated):
    items, _ = evaluated
    bad = []
    checked = 0
    for label, ev in items:
        for params, _, caps in ev.params:
            if caps is None:
                continue
            alpha, beta = caps
            for e in params.entries:
                checked += 1
                if e.alpha > alpha or e.beta > beta:
                    bad.append((label, e, caps))
    assert record(5, "coefficient caps hold exactly", not bad and checked > 0,
                  f"{checked} coefficients, {len(bad)} violations"), bad[:3]


def test_criterion_6_oracle_grid():
    rng = np.random.default_rng(SEED + 1)
    bad = 0
    grid_accepts = 0
    for i in range(1000):
        kind = taskgen.PROBLEM_CLASSES[i % len(taskgen.PROBLEM_CLASSES)]
        prob = taskgen.random_problem(rng, kind, sigma=float(rng.choice([1, 0.5, 0.25])),
                                      b=float(rng.choice([0, 1])))
        test = from_problem(prob)
        if dense_grid_accepts(test, steps=100_000):
            grid_accepts += 1
            bad += not tda_accepts(test).schedulable
    ok = bad == 0 and grid_accepts > 0
    assert record(6, "candidate-point oracle never rejects what the dense grid accepts", ok,
                  f"1000 instances, {grid_accepts} grid accepts, {bad} disagreements")


# frozen samples of the reference TDMA example (T_cycle=5, C_slot=2, sigma=1)
REFERENCE_POINTS = {
    "exact": (ExactTDMA(5, 2), {3: 0, 5: 2, 6: 2, 8: 2, 10: 4}),
    "segmented": (Segmented(5, 2, 1), {3: 0, 5: 2, 6: 0, 8: 2, 10: 4}),
    "bounded-delay": (BoundedDelay.from_tdma(5, 2), {3: 0, 5: 0.8, 6: 1.2, 8: 2.0, 10: 2.8}),
}


def test_criterion_7_service_curve_fixtures():
    bad = []
    n = 0
    for name, (curve, points) in REFERENCE_POINTS.items():
        for t, want in points.items():
            n += 1
            got = service_value(curve, t)
            if abs(got - want) > 1e-12:
                bad.append((name, t, got, want))
    assert record(7, "service-curve reference samples", not bad,
                  f"{n} points, {len(bad)} mismatches"), bad


def _same(a, b, rel):
    if a.hp2_ids != b.hp2_ids or len(a.entries) != len(b.entries):
        return False
    if not math.isclose(a.C_k_eff, b.C_k_eff, rel_tol=rel) or a.t_k != b.t_k:
        return False
    for x, y in zip(a.entries, b.entries):
        if x.task_id != y.task_id:
            return False
        for f in ("t", "alpha", "beta", "U"):
            if not math.isclose(getattr(x, f), getattr(y, f), rel_tol=rel, abs_tol=0.0):
                return False
    return True


def test_criterion_8_reduction_equivalence():
    rng = np.random.default_rng(SEED + 2)
    bad_jitter = bad_zero = 0
    for i in range(1000):
        s = (1.0, 0.5, 0.25)[i % 3]
        prob = taskgen.random_problem(rng, "uniform_jitter", sigma=s)
        d = prob.delta
        indep = prob.with_(delta=None, hp=tuple(
            Task(t.id, t.C, t.T, t.D, J=d * t.T) for t in prob.hp))
        bad_jitter += not _same(derive_uniform_jitter(prob), derive_independent_jitter(indep),
                                rel=1e-9)
        plain = taskgen.random_problem(rng, "inflation", sigma=s, b=0.0)
        bad_zero += not _same(derive_constant_inflation(plain),
                              derive_independent_jitter(plain), rel=0.0)
    ok = bad_jitter == 0 and bad_zero == 0
    assert record(8, "independent jitter reduces to uniform jitter and to inflation", ok,
                  f"1000 instances each, J=delta*T mismatches {bad_jitter} (rel 1e-9), "
                  f"J=0 mismatches {bad_zero} (exact)")
