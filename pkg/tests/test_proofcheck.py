import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ksubmod import Oracle, Orthant, brute_force_opt, gen_coverage, gen_signed_coverage, verify
from ksubmod.proofcheck import (
    build_greedy_trace,
    build_obar_sequence,
    build_q_sequence,
    check_bookkeeping,
    check_lemma_bounds,
    check_unconstrained_inequalities,
    gen_rejection_instance,
    obar_alignment_holds,
    ratio_lower_bound,
    restricted_gain_table,
    run_proofcheck,
)

from conftest import f1_instance, f2_instance


def test_q_sequence_single_element():
    q = build_q_sequence(Oracle(f1_instance().spec), Orthant((1, 0), 2))
    assert [x.assignment for x in q.orthants] == [(0, 0), (1, 0)]
    assert q.gains() == [2.0]


def test_q_sequence_tie_goes_to_lowest_pair():
    # candidates at ∅: (e1,1)=2, (e1,2)=1, (e2,1)=1, (e2,2)=2
    q = build_q_sequence(Oracle(f1_instance(budget=3).spec), Orthant((1, 2), 2))
    assert q.orthants[1].assignment == (1, 0)
    assert q.orthants[2].support() == {0, 1}
    assert q.r == 2


def test_obar_sequence_realigns_to_q():
    o = Orthant((1, 2), 2)
    q = build_q_sequence(Oracle(f1_instance(budget=3).spec), o)
    ob = build_obar_sequence(o, q)
    assert ob.orthants[0] == o
    assert ob.orthants[-1] == q.orthants[-1]
    assert obar_alignment_holds(o, q, ob)


def test_obar_refuses_foreign_q():
    q = build_q_sequence(Oracle(f1_instance().spec), Orthant((1, 0), 2))
    with pytest.raises(ValueError):
        build_obar_sequence(Orthant((0, 1), 2), q)


@pytest.mark.parametrize("seed", range(10))
def test_obar_alignment_random(seed):
    inst = gen_signed_coverage(4, 2, 8, seed=seed)
    oracle = Oracle(inst.spec)
    rng = np.random.default_rng(seed)
    o = Orthant(tuple(int(v) for v in rng.integers(0, 3, size=4)), 2)
    q = build_q_sequence(oracle, o)
    ob = build_obar_sequence(o, q)
    assert obar_alignment_holds(o, q, ob)
    for x in ob.orthants:
        assert x.support() == o.support()


def test_unconstrained_f1_and_f2():
    for inst, monotone in ((f1_instance(), True), (f2_instance(3), False)):
        opt = brute_force_opt(inst)
        chk = check_unconstrained_inequalities(Oracle(inst.spec), opt.orthant, monotone, verify(inst.spec))
        assert chk.holds()
        assert chk.min_slack >= -1e-9


def test_contract_refuses_non_monotone_as_monotone():
    inst = f2_instance()
    with pytest.raises(ValueError):
        check_unconstrained_inequalities(Oracle(inst.spec), Orthant((1, 0), 2), True, verify(inst.spec))


def test_f1_rejects_e2():
    inst = f1_instance(budget=2)
    opt = brute_force_opt(inst)
    assert opt.orthant.assignment == (0, 2)
    tr = build_greedy_trace(inst, Oracle(inst.spec), 0, opt)
    assert tr.p == 1 and tr.rejected[0] == 1
    assert not tr.invariant_failures
    bk = check_bookkeeping(inst, Oracle(inst.spec), tr)
    assert (bk.L_prime, bk.L_double_prime) == (1, 0)
    assert bk.holds()


def test_trace_none_when_opt_too_small():
    inst = f1_instance(budget=2)
    assert build_greedy_trace(inst, Oracle(inst.spec), 2) is None


@pytest.mark.parametrize("w", [1, 2, 3])
@pytest.mark.parametrize("signed", [False, True])
def test_crafted_rejection(w, signed):
    inst = gen_rejection_instance(w, k=2, seed=w, signed=signed)
    oracle = Oracle(inst.spec)
    tr = build_greedy_trace(inst, oracle, w)
    assert tr.has_rejection and tr.p >= 1
    assert tr.rejected[0] in tr.o.support()
    monotone = not signed
    lem = check_lemma_bounds(oracle, tr, w, monotone)
    assert lem.holds()
    bk = check_bookkeeping(inst, oracle, tr)
    assert bk.holds() and bk.L_prime > bk.L_double_prime - 1
    rep = run_proofcheck(inst, w, monotone=None if not signed else False)
    assert rep.passed and rep.rejection


def test_lemma_requires_rejection():
    inst = f2_instance(3)
    tr = build_greedy_trace(inst, Oracle(inst.spec), 1)
    with pytest.raises(ValueError):
        check_lemma_bounds(Oracle(inst.spec), tr, 1, False)


def test_restricted_gain_table_is_k_submodular():
    inst = gen_signed_coverage(5, 2, 10, seed=2)
    s0 = Orthant((1, 0, 0, 2, 0), 2)
    table, offset, rest = restricted_gain_table(inst.spec, s0)
    assert rest == [1, 2, 4] and offset >= 0
    assert table.value((0, 0, 0)) == pytest.approx(offset)
    assert verify(table).holds("k_submodular")


@pytest.mark.parametrize("seed", range(8))
def test_run_proofcheck_random(seed):
    inst = gen_coverage(4, 2, 8, seed=seed)
    rep = run_proofcheck(inst, 1)
    assert rep.passed, rep.format()
    assert "overall: PASS" in rep.format(inst.ids)


def test_ratio_bound_worked_example():
    rb = ratio_lower_bound([1, 1], 2)
    assert rb.lhs == 1.0
    assert rb.bound1 == 0.75
    assert rb.bound2 == pytest.approx(1 - math.exp(-1))
    assert rb.holds()


@pytest.mark.parametrize("rhos,B", [([0, 1], 2), ([1], 0), ([1, -1], 2), ([], 3)])
def test_ratio_bound_preconditions(rhos, B):
    with pytest.raises(ValueError):
        ratio_lower_bound(rhos, B)


@settings(max_examples=200, deadline=None)
@given(
    st.lists(st.floats(0, 10, allow_nan=False), min_size=1, max_size=20),
    st.floats(1e-3, 10),
    st.integers(1, 20),
)
def test_ratio_bound_property(rest, first, B):
    assert ratio_lower_bound([first] + rest[:-1], B).holds(1e-12)
