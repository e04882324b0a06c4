"""Acceptance suite: one pass/fail line per criterion.

Run with ``pytest tests/test_acceptance.py -s`` (lines are printed either
way through ``capsys.disabled``) or directly as a script.
"""

import json
import math

import numpy as np
import pytest

from ksubmod import (
    MONOTONE_RATIO,
    NON_MONOTONE_RATIO,
    SolverConfig,
    brute_force_opt,
    gen_coverage,
    gen_signed_coverage,
    gen_table,
    mutate_table,
    solve,
    tabulate,
    verify,
)
from ksubmod.generators import random_table
from ksubmod.instance import Instance
from ksubmod.proofcheck import gen_rejection_instance, ratio_lower_bound, run_proofcheck
from ksubmod.solver import oracle_call_bound

from conftest import f1_instance

TOL = 1e-9
_cache = {}


def report(capsys, number, ok, detail):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    if capsys is None:
        print(line)
    else:
        with capsys.disabled():
            print("\n" + line)


def _ratio_runs(family):
    """Solve runs for the monotone (criterion 1) or non-monotone (criterion 2) family."""
    if family in _cache:
        return _cache[family]
    runs = []
    if family == "monotone":
        cells = [(n, k) for n in (5, 6, 7, 8) for k in (2, 3)]
        count, w, mode = 200, 4, "monotone"
    else:
        cells = [(7, 2), (8, 2)]
        count, w, mode = 100, 7, "non-monotone"
    for idx in range(count):
        n, k = cells[idx % len(cells)]
        seed = 1000 * (family == "non-monotone") + idx
        if family == "monotone":
            inst = gen_coverage(n, k, 2 * n, (1, 5), "half", seed=seed)
        else:
            inst = gen_signed_coverage(n, k, 2 * n, (1, 5), "half", seed=seed)
        cfg = SolverConfig(w=w, mode=mode)
        rep = solve(inst, cfg)
        opt = brute_force_opt(inst)
        runs.append((inst, cfg, rep, opt))
    _cache[family] = runs
    return runs


def _ratio_check(capsys, number, family, threshold):
    runs = _ratio_runs(family)
    worst = min((rep.value / opt.value if opt.value > 0 else 1.0) for _, _, rep, opt in runs)
    bad = [i for i, (_, _, rep, opt) in enumerate(runs) if rep.value < threshold * opt.value - TOL]
    ok = not bad
    report(capsys, number, ok, f"{len(runs)} instances, worst greedy/OPT = {worst:.6f}, threshold {threshold:.6f}")
    return ok


def test_criterion_1_monotone_ratio(capsys):
    assert _ratio_check(capsys, 1, "monotone", MONOTONE_RATIO)


def test_criterion_2_non_monotone_ratio(capsys):
    assert _ratio_check(capsys, 2, "non-monotone", NON_MONOTONE_RATIO)


def test_criterion_3_verifier_soundness(capsys):
    mono_ok = signed_ok = 0
    for seed in range(100):
        n, k = 2 + seed % 4, 1 + seed % 3
        rep = verify(gen_coverage(n, k, 2 * n, seed=seed).spec, properties=("monotone", "k_submodular"))
        mono_ok += rep.holds("monotone") and rep.holds("k_submodular")
        n, k = 3 + seed % 3, 2 + seed % 2
        rep = verify(gen_signed_coverage(n, k, 2 * n, seed=seed).spec, properties=("monotone", "k_submodular"))
        signed_ok += rep.holds("k_submodular") and rep.fails("monotone")
    mutated = mutate_table(gen_table(f1_instance()), (1, 2), 10.0)
    rep = verify(mutated.spec)
    witness = rep.verdicts["k_submodular"].witness
    rejected = rep.fails("k_submodular") and witness is not None
    ok = mono_ok == 100 and signed_ok == 100 and rejected
    report(capsys, 3, ok, f"coverage {mono_ok}/100, signed {signed_ok}/100, mutated fixture rejected: {rejected}")
    assert ok


def _break_one_entry(spec, rng):
    """Raise one table entry until orthant submodularity or pairwise monotonicity fails."""
    base = Instance(spec, (1,) * spec.n, spec.n)
    for _ in range(50):
        a = tuple(int(v) for v in rng.integers(0, 3, size=spec.n))
        mutated = mutate_table(base, a, spec.value(a) + float(rng.uniform(1.0, 5.0))).spec
        rep = verify(mutated, properties=("orthant_submodular", "pairwise_monotone"))
        if rep.any_failed():
            return mutated
    raise AssertionError("no single-entry mutation broke a property")


def test_criterion_4_characterization(capsys):
    rng = np.random.default_rng(4)
    agree = broken = 0
    for idx in range(100):
        n = 2 + idx % 2
        if idx % 4 == 0:
            spec = random_table(n, 2, seed=idx)
        else:
            signed = idx % 2 == 0 and n == 3  # nonnegative non-monotone draws need n >= 3
            src = gen_signed_coverage(n, 2, 2 * n, seed=idx) if signed else gen_coverage(n, 2, 2 * n, seed=idx)
            spec = tabulate(src.spec)
        if idx < 50:
            spec = _break_one_entry(spec, rng)
        rep = verify(spec, properties=("orthant_submodular", "pairwise_monotone", "k_submodular"))
        agree += bool(rep.characterization_consistent)
        broken += rep.fails("k_submodular")
    ok = agree == 100
    report(capsys, 4, ok, f"verdicts agree on {agree}/100 tables ({broken} not k-submodular)")
    assert ok


def test_criterion_5_proof_suite(capsys):
    reports = []
    for idx in range(200):
        w = 1 + idx % 3
        if idx % 5 == 0:
            inst = gen_rejection_instance(w, k=2 + idx % 2, decoys=1, seed=idx, signed=bool(idx % 10))
            monotone = None if idx % 10 == 0 else False
        else:
            n, k = 3 + idx % 3, 2 + (idx // 3) % 2
            if idx % 2:
                inst, monotone = gen_coverage(n, k, 2 * n, seed=idx), True
            else:
                inst, monotone = gen_signed_coverage(n, k, 2 * n, seed=idx), False
        assert inst.n <= 5 and inst.k <= 3
        reports.append(run_proofcheck(inst, w, monotone=monotone))
    failed = [i for i, r in enumerate(reports) if not r.passed]
    rejections = sum(r.rejection for r in reports)
    slack = min(r.min_slack for r in reports)
    ok = not failed and rejections >= 20 and slack >= -TOL
    report(capsys, 5, ok, f"{200 - len(failed)}/200 passed, {rejections} with a rejection, min slack {slack:.3g}")
    assert ok


def test_criterion_6_ratio_lemma(capsys):
    rng = np.random.default_rng(6)
    bad = 0
    for _ in range(10_000):
        A, B = int(rng.integers(1, 21)), int(rng.integers(1, 21))
        rhos = rng.uniform(0.0, 1.0, size=A) * (rng.random(A) < 0.8)
        rhos[0] = rng.uniform(1e-6, 1.0)
        bad += not ratio_lower_bound(rhos, B).holds(1e-12)
    ok = bad == 0
    report(capsys, 6, ok, f"{10_000 - bad}/10000 draws satisfy both bounds")
    assert ok


def test_criterion_7_query_accounting(capsys):
    over = identical = total = 0
    for family in ("monotone", "non-monotone"):
        for inst, cfg, rep, _ in _ratio_runs(family):
            total += 1
            over += rep.oracle_calls > oracle_call_bound(inst.n, inst.k, rep.w)
            par = solve(inst, SolverConfig(**{**cfg.__dict__, "parallel": 8}))
            a = json.dumps(rep.to_dict(ids=inst.ids), indent=2)
            b = json.dumps(par.to_dict(ids=inst.ids), indent=2)
            identical += a == b
    ok = over == 0 and identical == total
    report(capsys, 7, ok, f"{total - over}/{total} within the call bound, {identical}/{total} parallel reports identical")
    assert ok


def test_criterion_8_constants(capsys):
    ok = (
        round(MONOTONE_RATIO, 3) == 0.432
        and round(NON_MONOTONE_RATIO, 3) == 0.317
        and math.isclose(MONOTONE_RATIO, 0.5 * (1 - math.exp(-2)))
        and math.isclose(NON_MONOTONE_RATIO, (1 - math.exp(-3)) / 3)
    )
    report(capsys, 8, ok, f"{MONOTONE_RATIO:.6f} -> {MONOTONE_RATIO:.3f}, {NON_MONOTONE_RATIO:.6f} -> {NON_MONOTONE_RATIO:.3f}")
    assert ok


if __name__ == "__main__":
    failures = 0
    for test in (
        test_criterion_1_monotone_ratio,
        test_criterion_2_non_monotone_ratio,
        test_criterion_3_verifier_soundness,
        test_criterion_4_characterization,
        test_criterion_5_proof_suite,
        test_criterion_6_ratio_lemma,
        test_criterion_7_query_accounting,
        test_criterion_8_constants,
    ):
        try:
            test(None)
        except AssertionError:
            failures += 1
    raise SystemExit(1 if failures else 0)
