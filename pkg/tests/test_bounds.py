import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import assume, given, settings, strategies as st

from k2usched.bounds import (IndexOrderError, KPointEntry, KPointParams, UniformBoundError,
                             capacity_rhs, capacity_test, evaluate_kpoint, general_test,
                             hyperbolic_rhs, hyperbolic_test, kpoint_bound,
                             log_utilization_test, max_coefficients)


def E(t, a, b, u, tid="x"):
    return KPointEntry(tid, t, a, b, u)


class TestEvaluateKPoint:
    def test_no_hp_tasks(self):
        v = evaluate_kpoint(KPointParams(t_k=3, C_k_eff=1))
        assert v.schedulable and v.witness == 1

    def test_accepts_at_first_point(self):
        # 0.5 + 1*2*0.5 = 1.5 <= 2
        v = evaluate_kpoint(KPointParams(3, 0.5, [E(2, 1, 1, 0.5)]))
        assert v.schedulable and v.witness == 1
        assert v.margin == pytest.approx(0.5)

    def test_unknown(self):
        # j=1: 1.9 + 1.8 > 2 ; j=2: 1.9 + 1.8 + 1.8 > 2
        v = evaluate_kpoint(KPointParams(2, 1.9, [E(2, 1, 1, 0.9)]))
        assert not v.schedulable

    def test_index_order_violated(self):
        p = KPointParams(10, 1, [E(5, 1, 1, 0.1, "a"), E(3, 1, 1, 0.1, "b")])
        with pytest.raises(IndexOrderError, match="index order violated"):
            evaluate_kpoint(p)
        with pytest.raises(IndexOrderError):
            evaluate_kpoint(KPointParams(2, 1, [E(3, 1, 1, 0.1)]))

    def test_invalid_params(self):
        with pytest.raises(ValueError):
            KPointParams(1, 0)
        with pytest.raises(ValueError):
            KPointParams(1, 1, [E(1, 0, 1, 0.1)])

    def test_kpoint_bound_matches_definition(self):
        p = KPointParams(10, 1, [E(2, 1.5, 0.5, 0.2, "a"), E(4, 1.2, 0.25, 0.1, "b")])
        assert kpoint_bound(p, 1) == pytest.approx(1 + 1.5 * 2 * 0.2 + 1.2 * 4 * 0.1)
        assert kpoint_bound(p, 3) == pytest.approx(
            1 + 1.5 * 2 * 0.2 + 1.2 * 4 * 0.1 + 0.5 * 2 * 0.2 + 0.25 * 4 * 0.1)


class TestHyperbolic:
    def test_accepts(self):
        # (1/6 + 1) * 1.5 = 1.75 <= 2
        v = hyperbolic_test(KPointParams(3, 0.5, [E(2, 1, 1, 0.5)]), 1, 1)
        assert v.schedulable
        assert v.margin == pytest.approx(float(Fraction(2, 1) / Fraction(3, 2) - 1 - Fraction(1, 6)))

    def test_empty_product(self):
        assert hyperbolic_test(KPointParams(1, 1), 1, 1).schedulable

    def test_unknown(self):
        # 1.1 * 2 = 2.2 > 2
        assert not hyperbolic_test(KPointParams(10, 1, [E(1, 1, 1, 1.0)]), 1, 1).schedulable

    def test_uniform_bound_checked(self):
        p = KPointParams(3, 0.5, [E(2, 1.5, 1, 0.5)])
        with pytest.raises(UniformBoundError, match="uniform bound violated"):
            hyperbolic_test(p, 1, 1)
        with pytest.raises(UniformBoundError):
            capacity_test(p, 1.5, 0.5)
        with pytest.raises(UniformBoundError):
            log_utilization_test(p, 1.5, 0)


class TestCapacity:
    @pytest.mark.parametrize("k", [2, 10])
    def test_liu_layland_values(self, k):
        mpmath.mp.dps = 40
        exact = k * (mpmath.mpf(2) ** (mpmath.mpf(1) / k) - 1)
        assert capacity_rhs(k, 1, 1) == pytest.approx(float(exact), abs=1e-12)

    def test_frozen_values(self):
        assert capacity_rhs(2, 1, 1) == pytest.approx(0.828427, abs=1e-6)
        assert capacity_rhs(10, 1, 1) == pytest.approx(0.717735, abs=1e-6)

    @pytest.mark.parametrize("k", range(2, 65))
    def test_identity_with_liu_layland_form(self, k):
        assert abs(capacity_rhs(k, 1, 1) - k * (2 ** (1 / k) - 1)) <= 1e-12

    def test_monotone_towards_ln2(self):
        vals = [capacity_rhs(k, 1, 1) for k in (2, 10, 100, 10_000, 1_000_000)]
        assert all(a > b for a, b in zip(vals, vals[1:]))
        assert vals[-1] - math.log(2) < 1e-6

    def test_test_uses_k_entries_plus_one(self):
        p = KPointParams(10, 1, [E(5, 1, 1, 0.5)])
        v = capacity_test(p, 1, 1)
        assert v.margin == pytest.approx(2 * (math.sqrt(2) - 1) - 0.6)


class TestLog:
    def test_accepts(self):
        v = log_utilization_test(KPointParams(3, 0.5, [E(2, 1, 1, 0.5)]), 1, 1)
        assert v.schedulable
        assert v.margin == pytest.approx(math.log(12 / 7) - 0.5)

    def test_boundary_accepts(self):
        assert log_utilization_test(KPointParams(1, 1), 1, 1).schedulable

    def test_unknown(self):
        assert not log_utilization_test(KPointParams(3, 0.5, [E(2, 1, 1, 0.6)]), 1, 1).schedulable


class TestGeneral:
    def test_accepts(self):
        v = general_test(KPointParams(3, 0.5, [E(2, 1, 1, 0.5)]))
        assert v.schedulable and v.margin == pytest.approx(1 / 3 - 1 / 6)

    def test_empty(self):
        assert general_test(KPointParams(1, 1)).schedulable

    def test_unknown(self):
        assert not general_test(KPointParams(2, 1, [E(1, 1, 1, 0.5)])).schedulable

    def test_matches_direct_formula(self):
        es = [E(1, 1.2, 0.4, 0.1, "a"), E(2, 1.1, 0.3, 0.2, "b"), E(3, 1.0, 0.9, 0.15, "c")]
        p = KPointParams(5, 1, es)
        expect = 1 - sum(
            es[i].U * (es[i].alpha + es[i].beta)
            / math.prod(es[j].beta * es[j].U + 1 for j in range(i, 3)) for i in range(3))
        assert general_test(p).margin == pytest.approx(expect - 0.2)


def test_max_coefficients():
    p = KPointParams(10, 1, [E(1, 1.2, 0.4, 0.1, "a"), E(2, 1.1, 0.9, 0.2, "b")])
    assert max_coefficients(p) == (1.2, 0.9)
    assert max_coefficients(KPointParams(1, 1)) == (1.0, 1.0)


# --- properties over arbitrary k-point parameters -------------------------

entry_st = st.tuples(st.floats(0.05, 10), st.floats(0.05, 3), st.floats(0.05, 3), st.floats(0.01, 0.6))


@st.composite
def params_st(draw):
    rows = draw(st.lists(entry_st, max_size=7))
    t_k = draw(st.floats(0.1, 12))
    rows = sorted(rows)
    t_k = max([t_k] + [r[0] for r in rows])
    ck = draw(st.floats(0.01, 1.0)) * t_k
    return KPointParams(t_k, ck, [E(t, a, b, u, f"t{i}") for i, (t, a, b, u) in enumerate(rows)])


@settings(max_examples=400)
@given(params_st())
def test_closed_forms_imply_kpoint(p):
    a, b = max_coefficients(p)
    kp = evaluate_kpoint(p)
    for v in (hyperbolic_test(p, a, b), capacity_test(p, a, b),
              log_utilization_test(p, a, b), general_test(p)):
        if v.margin > 1e-9:
            assert kp.schedulable, v.test


@given(st.lists(st.floats(0.01, 2), min_size=1, max_size=6), st.integers(0, 5),
       st.floats(1e-3, 1), st.floats(0.1, 3), st.floats(0.1, 3), st.floats(1e-3, 1))
def test_hyperbolic_rhs_monotone(utils, idx, bump, alpha, beta, dbeta):
    idx %= len(utils)
    base = hyperbolic_rhs(alpha, beta, utils)
    more = list(utils)
    more[idx] += bump
    assert hyperbolic_rhs(alpha, beta, more) < base
    # in beta the bound only shrinks while it is positive: for one task it is
    # (1 - alpha U)/(beta U + 1), which grows with beta once alpha U > 1
    if base > 1e-9:
        assert hyperbolic_rhs(alpha, beta + dbeta, utils) < base


def test_hyperbolic_rhs_single_task_closed_form():
    for a, b, u in [(1, 1, 0.5), (2, 0.5, 0.3), (1.5, 2, 1.0)]:
        assert hyperbolic_rhs(a, b, [u]) == pytest.approx((1 - a * u) / (b * u + 1))


@given(st.floats(0.1, 5), st.floats(0.1, 2), st.floats(0.1, 2), st.floats(0.01, 0.5),
       st.floats(0.1, 2), st.floats(0.1, 2), st.floats(0.01, 0.5))
def test_permuting_equal_points_is_harmless(t, a1, b1, u1, a2, b2, u2):
    # second task chosen so its alpha*U*t and beta*U*t products equal the first's
    u2 = u1 * a1 / a2
    assume(u2 > 0)
    b2 = b1 * u1 / u2
    x, y = E(t, a1, b1, u1, "x"), E(t, a2, b2, u2, "y")
    p1 = KPointParams(t * 2, 0.3 * t, [x, y])
    p2 = KPointParams(t * 2, 0.3 * t, [y, x])
    v1, v2 = evaluate_kpoint(p1), evaluate_kpoint(p2)
    assert v1.schedulable == v2.schedulable
    assert v1.margin == pytest.approx(v2.margin, abs=1e-9)
