import itertools
import math

import numpy as np
import pytest

from ksubmod import (
    CoverageSpec,
    Instance,
    Oracle,
    Orthant,
    SolverConfig,
    best_density_pair,
    brute_force_opt,
    enumerate_seeds,
    gen_coverage,
    gen_signed_coverage,
    greedy_extend,
    solve,
)
from ksubmod.caps import CapExceeded
from ksubmod.solver import InfeasibleSeed, oracle_call_bound

from conftest import f1_instance, f2_instance


def reference_solve(inst, w, strict=False):
    """Plain restatement of the partial-enumeration greedy for cross-checking.

    Exact arithmetic is assumed (integer weights), so ties are real ties and
    the lowest (element, coordinate) wins.
    """
    n, k, c, L = inst.n, inst.k, inst.costs, inst.budget
    f = inst.spec.value
    sizes = [w - 1] if strict and w >= 1 else range(w)
    best_a, best_v = None, None
    for m in sizes:
        for sup in itertools.combinations(range(n), m):
            if sum(c[e] for e in sup) > L:
                continue
            for coords in itertools.product(range(1, k + 1), repeat=m):
                a = [0] * n
                for e, i in zip(sup, coords):
                    a[e] = i
                v = f(a)
                if best_v is None or v > best_v:
                    best_a, best_v = tuple(a), v
    for sup in itertools.combinations(range(n), w) if w <= n else []:
        if sum(c[e] for e in sup) > L:
            continue
        for coords in itertools.product(range(1, k + 1), repeat=w):
            s = [0] * n
            for e, i in zip(sup, coords):
                s[e] = i
            used = sum(c[e] for e in sup)
            rest = [e for e in range(n) if not s[e]]
            while rest:
                base = f(s)
                pick = None
                for e in rest:
                    for i in range(1, k + 1):
                        t = list(s)
                        t[e] = i
                        dens = (f(t) - base) / c[e]
                        if pick is None or dens > pick[0]:
                            pick = (dens, e, i)
                _, e, i = pick
                if used + c[e] <= L:
                    s[e] = i
                    used += c[e]
                rest.remove(e)
            v = f(s)
            if best_v is None or v > best_v:
                best_a, best_v = tuple(s), v
    if best_a is None:
        best_a = (0,) * n
        best_v = f(best_a)
    return best_a, best_v


def integer_coverage(seed, n=5, k=2, universe=8):
    rng = np.random.default_rng(seed)
    weights = tuple(float(x) for x in rng.integers(1, 6, size=universe))
    covers = tuple(
        tuple(int(sum(1 << u for u in np.flatnonzero(rng.random(universe) < 0.3)) or 1) for _ in range(k))
        for _ in range(n)
    )
    costs = tuple(int(x) for x in rng.integers(1, 5, size=n))
    return Instance(CoverageSpec(weights, covers), costs, math.ceil(sum(costs) / 2))


def test_best_density_pair_at_empty():
    inst = f1_instance()
    ch = best_density_pair(Oracle(inst.spec), inst.empty(), {0, 1}, inst.costs)
    assert (ch.e, ch.i, ch.density) == (0, 1, 2.0)


def test_best_density_pair_tie_goes_to_lowest_coordinate():
    inst = f1_instance()
    ch = best_density_pair(Oracle(inst.spec), Orthant((1, 0), 2), {1}, inst.costs)
    # Δ_{e2,1} = Δ_{e2,2} = 1 at cost 2
    assert (ch.e, ch.i, ch.density) == (1, 1, 0.5)


def test_greedy_rejects_unaffordable_element():
    inst = f1_instance(budget=2)
    run = greedy_extend(inst, Oracle(inst.spec), inst.empty())
    assert run.result.assignment == (1, 0)
    assert run.value == 2
    assert [(s.e, s.i, s.accepted) for s in run.steps] == [(0, 1, True), (1, 1, False)]


def test_greedy_places_both_when_budget_allows():
    inst = f1_instance(budget=3)
    run = greedy_extend(inst, Oracle(inst.spec), inst.empty())
    assert run.value == 3
    assert run.result.size() == 2


def test_greedy_refuses_infeasible_seed():
    inst = f1_instance(budget=1)
    with pytest.raises(InfeasibleSeed):
        greedy_extend(inst, Oracle(inst.spec), Orthant((0, 1), 2))


def test_enumerate_seeds_counts():
    inst = f1_instance(budget=2)
    assert [x.assignment for x in enumerate_seeds(inst, 0)] == [(0, 0)]
    assert [x.assignment for x in enumerate_seeds(inst, 1)] == [(1, 0), (2, 0), (0, 1), (0, 2)]
    assert list(enumerate_seeds(inst, 2)) == []


def test_solve_f1():
    inst = f1_instance(budget=2)
    assert solve(inst, SolverConfig(w=0)).value == 2
    rep = solve(inst, SolverConfig(w=4))
    assert rep.value == 2 == brute_force_opt(inst).value
    assert rep.seeds == 0 and rep.winning_seed is None


def test_solve_f2_non_monotone():
    inst = f2_instance(budget=3)
    rep = solve(inst, SolverConfig(w=7, mode="non-monotone"))
    assert rep.value == pytest.approx(brute_force_opt(inst).value)


def test_auto_mode_reads_monotonicity():
    assert solve(f1_instance(), SolverConfig(mode="auto")).monotone
    rep = solve(f2_instance(), SolverConfig(mode="auto"))
    assert not rep.monotone and rep.w == 7


@pytest.mark.parametrize("seed", range(15))
@pytest.mark.parametrize("w", [0, 1, 2, 3])
def test_matches_reference(seed, w):
    inst = integer_coverage(seed)
    rep = solve(inst, SolverConfig(w=w))
    a, v = reference_solve(inst, w)
    assert rep.value == v
    assert rep.solution.assignment == a


@pytest.mark.parametrize("seed", range(6))
def test_strict_mode_matches_reference(seed):
    inst = integer_coverage(seed)
    rep = solve(inst, SolverConfig(w=2, strict_paper=True))
    assert rep.value == reference_solve(inst, 2, strict=True)[1]


@pytest.mark.parametrize("seed", range(10))
def test_solution_feasible_and_bounded(seed):
    inst = gen_coverage(6, 2, 12, seed=seed)
    rep = solve(inst, SolverConfig(w=2))
    assert inst.feasible(rep.solution)
    assert rep.value <= brute_force_opt(inst).value + 1e-12
    assert rep.oracle_calls <= oracle_call_bound(inst.n, inst.k, rep.w)


def test_best_prefix_never_hurts():
    for seed in range(8):
        inst = gen_signed_coverage(5, 2, 10, seed=seed)
        plain = solve(inst, SolverConfig(w=1, mode="non-monotone"))
        prefix = solve(inst, SolverConfig(w=1, mode="non-monotone", best_prefix=True))
        assert prefix.value >= plain.value - 1e-12


def test_prefilter_keeps_value():
    inst = gen_coverage(6, 3, 12, seed=1, budget_rule=4)
    a = solve(inst, SolverConfig(w=2))
    b = solve(inst, SolverConfig(w=2, prefilter=True))
    assert a.value == b.value
    assert b.oracle_calls <= a.oracle_calls


def test_parallel_reports_identical():
    inst = gen_coverage(7, 2, 14, seed=3)
    one = solve(inst, SolverConfig(w=3)).to_dict(ids=inst.ids)
    many = solve(inst, SolverConfig(w=3, parallel=4)).to_dict(ids=inst.ids)
    assert one == many


def test_seed_cap_refuses():
    with pytest.raises(CapExceeded):
        solve(gen_coverage(8, 3, 10, seed=0), SolverConfig(w=4, seed_cap=100))


def test_report_format_mentions_direct_scan():
    inst = f1_instance()
    text = solve(inst, SolverConfig(w=4)).format(inst.ids)
    assert "value:         2" in text
    assert "direct scan" in text
