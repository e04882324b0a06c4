"""Executable checks of the approximation analysis on concrete instances.

Given an optimum ``o`` (from brute force) these routines rebuild the
sequences the ratio analysis reasons about and evaluate each inequality
numerically:

* the max-gain reordering ``q^0 ⪯ q^1 ⪯ ... ⪯ q^r`` of ``o``'s support and
  its realigned companions ``ō^j = override_with(ō^{j-1}, q^j)``;
* the greedy run from ``s^0 = q^w`` with its shadow sequences ``o^j`` and
  ``o^{j-1/2}`` up to the first rejected optimal element ``e^{p+1}``;
* the per-step bounds, the lemma bounds, the density bookkeeping and the
  budget comparison ``L' >= L''``.

Every check reports slacks (right side minus left side) so a dashboard can
tell "held with room" from "held at equality". Checks that need a rejected
optimal element return ``None`` from :func:`run_proofcheck` when greedy never
rejects one.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .exact import OptResult, brute_force_opt
from .functions import CoverageSpec, Oracle, SignedCoverageSpec, TableSpec
from .generators import GenerationError, is_nonnegative
from .instance import Instance
from .orthant import Orthant, make_singleton
from .solver import GreedyStep, greedy_extend
from .verify import VerificationReport, verify

TOL = 1e-9


@dataclass
class QSequence:
    orthants: list[Orthant]
    values: list[float]

    @property
    def r(self) -> int:
        return len(self.orthants) - 1

    def gains(self) -> list[float]:
        return [b - a for a, b in zip(self.values, self.values[1:])]


@dataclass
class ObarSequence:
    orthants: list[Orthant]


def build_q_sequence(oracle: Oracle, o: Orthant) -> QSequence:
    """Order ``P(o)`` by repeatedly taking the value-maximizing (element, coordinate).

    Coordinates range over all of ``[k]``, not only ``o``'s. Ties go to the
    lowest (element, coordinate), as in the solver.
    """
    q = Orthant.empty(o.n, o.k)
    seq, vals = [q], [oracle.evaluate(q)]
    remaining = sorted(o.support())
    while remaining:
        best = None
        for e in remaining:
            for i in range(1, o.k + 1):
                v = oracle.evaluate(q.with_element(e, i))
                if best is None or v > best[0]:
                    best = (v, e, i)
        v, e, i = best
        q = q.with_element(e, i)
        seq.append(q)
        vals.append(v)
        remaining.remove(e)
    return QSequence(seq, vals)


def build_obar_sequence(o: Orthant, qseq: QSequence) -> ObarSequence:
    if qseq.orthants[-1].support() != o.support():
        raise ValueError("q-sequence was not built from this optimum")
    seq = [o]
    for q in qseq.orthants[1:]:
        seq.append(seq[-1].override_with(q))
    return ObarSequence(seq)


def obar_alignment_holds(o: Orthant, qseq: QSequence, obar: ObarSequence) -> bool:
    """P(ō^j) ⊆ P(o), and ō^j agrees with q^j on P(q^j), for every j."""
    sup = o.support()
    for q, ob in zip(qseq.orthants, obar.orthants):
        if not ob.support() <= sup:
            return False
        if any(ob[e] != q[e] for e in q.support()):
            return False
    return True


def _check_contract(verification: VerificationReport | None, monotone: bool):
    if verification is None:
        return
    if verification.fails("k_submodular"):
        raise ValueError("function failed k-submodularity verification")
    if monotone and verification.fails("monotone"):
        raise ValueError("monotone analysis requested for a function that failed the monotonicity check")


@dataclass
class UnconstrainedCheck:
    step_slacks: list[float]      # per j: factor·(f(q^j) - f(q^{j-1})) - (f(ō^{j-1}) - f(ō^j))
    summed_slacks: list[float]    # per w = 1..r: f(ō^w) - (f(o) - factor·f(q^w))
    aligned: bool

    @property
    def vacuous(self) -> bool:
        return not self.step_slacks

    @property
    def min_slack(self) -> float:
        return min(self.step_slacks + self.summed_slacks, default=math.inf)

    def holds(self, tol: float = TOL) -> bool:
        return self.aligned and self.min_slack >= -tol


def check_unconstrained_inequalities(
    oracle: Oracle,
    o: Orthant,
    monotone: bool,
    verification: VerificationReport | None = None,
) -> UnconstrainedCheck:
    """Per-step and summed bounds relating the ō-sequence to the q-sequence.

    ``f(ō^{j-1}) - f(ō^j) <= c·(f(q^j) - f(q^{j-1}))`` with ``c = 1`` for
    monotone and ``c = 2`` for non-monotone objectives, and the summed forms
    ``f(o) - c·f(q^w) <= f(ō^w)``.
    """
    _check_contract(verification, monotone)
    factor = 1.0 if monotone else 2.0
    q = build_q_sequence(oracle, o)
    ob = build_obar_sequence(o, q)
    fob = [oracle.evaluate(x) for x in ob.orthants]
    fo = fob[0]
    steps, summed = [], []
    for j in range(1, q.r + 1):
        steps.append(factor * (q.values[j] - q.values[j - 1]) - (fob[j - 1] - fob[j]))
        summed.append(fob[j] - (fo - factor * q.values[j]))
    return UnconstrainedCheck(steps, summed, obar_alignment_holds(o, q, ob))


@dataclass
class GreedyTrace:
    w: int
    o: Orthant
    q: QSequence
    obar: ObarSequence
    steps: list[GreedyStep]          # filtered run: accepted steps and rejected steps on P(o)
    s: list[Orthant]                 # s^0 .. s^p
    s_values: list[float]
    p: int
    rejected: tuple[int, int] | None  # (e^{p+1}, i^{p+1}) chosen but over budget
    i_star: int | None = None        # e^{p+1}'s coordinate in ō^w
    o_seq: list[Orthant] | None = None       # o^0 .. o^p
    o_half: list[Orthant] | None = None      # o^{1/2} .. o^{p-1/2}
    theta: list[float] = field(default_factory=list)  # θ_1 .. θ_{p+1}
    invariant_failures: list[str] = field(default_factory=list)

    @property
    def s0(self) -> Orthant:
        return self.s[0]

    @property
    def o0(self) -> Orthant | None:
        return self.o_seq[0] if self.o_seq else None

    @property
    def has_rejection(self) -> bool:
        return self.rejected is not None and self.o_seq is not None


def build_greedy_trace(
    instance: Instance,
    oracle: Oracle,
    w: int,
    opt: OptResult | None = None,
) -> GreedyTrace | None:
    """Greedy from ``s^0 = q^w`` with the shadow sequences of the analysis.

    Returns ``None`` when ``|P(o)| < w``. Rejected elements outside ``P(o)``
    are dropped from the recorded run; removing a candidate that is never
    placed changes neither the greedy states nor the later choices.
    """
    opt = opt or brute_force_opt(instance)
    o = opt.orthant
    if o.size() < w:
        return None
    q = build_q_sequence(oracle, o)
    ob = build_obar_sequence(o, q)
    s0 = q.orthants[w]
    run = greedy_extend(instance, oracle, s0)
    sup_o = o.support()
    steps = [st for st in run.steps if st.accepted or st.e in sup_o]

    p = 0
    while p < len(steps) and steps[p].accepted:
        p += 1
    s = run.states[: p + 1]
    s_values = run.values[: p + 1]
    trace = GreedyTrace(w, o, q, ob, steps, s, s_values, p, None, theta=[st.density for st in steps[: p + 1]])
    if p == len(steps):
        return trace

    e_rej, i_rej = steps[p].e, steps[p].i
    trace.rejected = (e_rej, i_rej)
    obar_w = ob.orthants[w]
    i_star = obar_w[e_rej]
    if not i_star:
        return trace  # e^{p+1} fell out of ō^w; the analysis leaves this case undefined
    trace.i_star = i_star
    o_seq = [obar_w.without(e_rej)]
    o_half = []
    for st in steps[:p]:
        single = make_singleton(o.n, o.k, st.e, st.i)
        o_half.append(o_seq[-1].join(single))
        o_seq.append(o_seq[-1].override_with(single))
    trace.o_seq, trace.o_half = o_seq, o_half
    trace.invariant_failures = _trace_invariants(trace)
    return trace


def _trace_invariants(tr: GreedyTrace) -> list[str]:
    bad = []
    for j in range(1, tr.p + 1):
        if not tr.s[j - 1].precedes(tr.o_half[j - 1]):
            bad.append(f"s^{j - 1} not ⪯ o^{j - 1}/2")
        if not tr.s[j - 1].precedes(tr.o_seq[j - 1]):
            bad.append(f"s^{j - 1} not ⪯ o^{j - 1}")
    p_o0 = tr.o_seq[0].support()
    for t in range(tr.p + 1):
        ps = tr.s[t].support()
        if p_o0 - ps != tr.o_seq[t].support() - ps:
            bad.append(f"support identity fails at t={t}")
    return bad


@dataclass
class LemmaCheck:
    order_slacks: list[float]       # per coordinate j: f(s^0)/w - Δ_{e^{p+1}, j} f(o^0)
    iteration_slacks: list[float]   # per t = 0..p

    @property
    def min_slack(self) -> float:
        return min(self.order_slacks + self.iteration_slacks, default=math.inf)

    def holds(self, tol: float = TOL) -> bool:
        return self.min_slack >= -tol


def check_lemma_bounds(
    oracle: Oracle,
    trace: GreedyTrace,
    w: int,
    monotone: bool,
    verification: VerificationReport | None = None,
) -> LemmaCheck:
    """The rejected element's bounded gain at ``o^0`` and the per-iteration bounds.

    Order bound: ``Δ_{e^{p+1}, j} f(o^0) <= f(s^0) / w`` for all ``j`` (needs ``w >= 1``).
    Iteration bounds, for ``t = 0..p``::

        f(o^0) <= a·f(s^t) - b·f(s^0) + Σ_{e ∈ P(o^0) \\ P(s^t)} Δ_{e, o^0_e} f(s^t)

    with ``(a, b) = (2, 1)`` for monotone and ``(3, 2)`` for non-monotone f.
    """
    _check_contract(verification, monotone)
    if not trace.has_rejection:
        raise ValueError("trace lacks a rejection index")
    o0 = trace.o0
    f = oracle.evaluate
    fs0 = trace.s_values[0]
    f_o0 = f(o0)
    order = []
    if w >= 1:
        e = trace.rejected[0]
        for j in range(1, o0.k + 1):
            order.append(fs0 / w - (f(o0.with_element(e, j)) - f_o0))
    a, b = (2.0, 1.0) if monotone else (3.0, 2.0)
    iters = []
    p_o0 = o0.support()
    for t in range(trace.p + 1):
        st, fst = trace.s[t], trace.s_values[t]
        tail = sum(f(st.with_element(e, o0[e])) - fst for e in sorted(p_o0 - st.support()))
        iters.append(a * fst - b * fs0 + tail - f_o0)
    return LemmaCheck(order, iters)


@dataclass
class BookkeepingCheck:
    rho_slacks: list[float]   # per t = 1..p: |Σ_{l <= L_t} ρ_l - g(s^t \ s^0)|, negated
    L_prime: int              # c(P(s^p) \ P(s^0))
    L_double_prime: int       # c(P(o^0) \ P(s^0))

    def holds(self, tol: float = TOL) -> bool:
        return self.L_prime >= self.L_double_prime and all(s >= -tol for s in self.rho_slacks)


def check_bookkeeping(instance: Instance, oracle: Oracle, trace: GreedyTrace) -> BookkeepingCheck:
    """Density bookkeeping and the budget comparison ``L' >= L''``.

    ``ρ`` repeats ``θ_t`` once per unit of ``c_{e^t}``; its prefix sums up to
    ``L_t`` must reproduce ``g(s^t \\ s^0) = f((s^t \\ s^0) ⊔ s^0) - f(s^0)``,
    evaluated here afresh through the oracle.
    """
    if not trace.has_rejection:
        raise ValueError("trace lacks a rejection index")
    costs = instance.costs
    s0 = trace.s0
    f_s0 = oracle.evaluate(s0)
    rho: list[float] = []
    slacks = []
    for t in range(1, trace.p + 1):
        st = trace.steps[t - 1]
        rho.extend([trace.theta[t - 1]] * costs[st.e])
        g = oracle.evaluate(trace.s[t].minus(s0).join(s0)) - f_s0
        slacks.append(-abs(math.fsum(rho) - g))
    p_s0 = s0.support()
    L1 = sum(costs[e] for e in trace.s[trace.p].support() - p_s0)
    L2 = sum(costs[e] for e in trace.o0.support() - p_s0)
    return BookkeepingCheck(slacks, L1, L2)


def restricted_gain_table(spec, s0: Orthant) -> tuple[TableSpec, float, list[int]]:
    """Tabulate ``g(x) = f(x ⊔ s^0) - f(s^0)`` over the elements outside ``P(s^0)``.

    ``g`` can be negative for non-monotone f, so the table stores
    ``g + offset`` with the smallest offset making it nonnegative; adding a
    constant changes none of the submodularity or monotonicity verdicts.
    Returns (table, offset, complement element indices).
    """
    rest = [e for e in range(s0.n) if not s0[e]]
    k = s0.k
    base = spec.value(s0.assignment)
    vals = []
    for sub in itertools.product(range(k + 1), repeat=len(rest)):
        a = list(s0.assignment)
        for e, c in zip(rest, sub):
            a[e] = c
        vals.append(spec.value(tuple(a)) - base)
    arr = np.asarray(vals)
    offset = max(0.0, -float(arr.min()))
    return TableSpec(len(rest), k, tuple((arr + offset).tolist())), offset, rest


@dataclass
class ProofcheckReport:
    w: int
    monotone: bool
    opt_value: float
    r: int
    unconstrained: UnconstrainedCheck
    trace: GreedyTrace | None
    lemma: LemmaCheck | None
    bookkeeping: BookkeepingCheck | None
    g_verified: bool | None

    @property
    def rejection(self) -> bool:
        return self.trace is not None and self.trace.has_rejection

    @property
    def trace_invariants_hold(self) -> bool | None:
        if not self.rejection:
            return None
        return not self.trace.invariant_failures

    @property
    def passed(self) -> bool:
        ok = self.unconstrained.holds()
        for part in (self.lemma, self.bookkeeping):
            if part is not None:
                ok = ok and part.holds()
        if self.trace_invariants_hold is False or self.g_verified is False:
            ok = False
        return ok

    @property
    def min_slack(self) -> float:
        vals = [self.unconstrained.min_slack]
        if self.lemma is not None:
            vals.append(self.lemma.min_slack)
        if self.bookkeeping is not None:
            vals.extend(self.bookkeeping.rho_slacks)
        return min(vals)

    def format(self, ids=None) -> str:
        def show(v):
            if v is None:
                return "not exercised"
            return "holds" if v else "FAILS"

        u = self.unconstrained
        lines = [
            f"optimum value {self.opt_value!r} with |P(o)| = {self.r}; w = {self.w} "
            f"({'monotone' if self.monotone else 'non-monotone'} bounds)",
            f"  q/ō step and summed bounds: {show(u.holds()) if not u.vacuous else 'vacuous'}"
            f" (min slack {u.min_slack:.3g})",
        ]
        if self.trace is None:
            lines.append("  greedy trace: |P(o)| < w, nothing to trace")
        elif not self.rejection:
            lines.append(f"  greedy trace: no optimal element rejected (p = {self.trace.p})")
        else:
            e, i = self.trace.rejected
            name = ids[e] if ids else f"e{e + 1}"
            lines.append(f"  greedy trace: p = {self.trace.p}, rejected {name} (coordinate {i})")
        lines.append(f"  ⪯ relations and support identity: {show(self.trace_invariants_hold)}")
        lines.append(f"  lemma bounds: {show(None if self.lemma is None else self.lemma.holds())}")
        bk = self.bookkeeping
        lines.append(f"  θ/ρ bookkeeping and L' >= L'': {show(None if bk is None else bk.holds())}")
        if bk is not None:
            lines.append(f"    L' = {bk.L_prime}, L'' = {bk.L_double_prime}")
        lines.append(f"  g is k-submodular: {show(self.g_verified)}")
        lines.append(f"overall: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines)


def run_proofcheck(
    instance: Instance,
    w: int,
    monotone: bool | None = None,
    opt: OptResult | None = None,
    check_g: bool = True,
) -> ProofcheckReport:
    """Every proof check on one instance; ``monotone=None`` asks the verifier."""
    verification = verify(instance.spec)
    if monotone is None:
        monotone = verification.holds("monotone")
    _check_contract(verification, monotone)
    oracle = Oracle(instance.spec)
    opt = opt or brute_force_opt(instance)
    unc = check_unconstrained_inequalities(oracle, opt.orthant, monotone)
    trace = build_greedy_trace(instance, oracle, w, opt)
    lemma = bk = None
    g_ok = None
    if trace is not None and trace.has_rejection:
        lemma = check_lemma_bounds(oracle, trace, w, monotone)
        bk = check_bookkeeping(instance, oracle, trace)
    if check_g and trace is not None and trace.s0.size() < instance.n:
        table, _, _ = restricted_gain_table(instance.spec, trace.s0)
        g_ok = verify(table, properties=("orthant_submodular", "pairwise_monotone", "k_submodular")).holds(
            "k_submodular"
        )
    return ProofcheckReport(w, monotone, opt.value, opt.r, unc, trace, lemma, bk, g_ok)


def gen_rejection_instance(
    w: int,
    k: int = 2,
    decoys: int = 1,
    seed: int = 0,
    signed: bool = False,
    max_attempts: int = 200,
) -> Instance:
    """A coverage instance built so greedy from ``q^w`` rejects an optimal element.

    Layout: ``w`` heavy core elements, one medium "tail" element that belongs
    to the optimum but has modest density, and ``decoys`` cheap elements of
    higher density whose total value is below the tail's. Greedy spends the
    slack on decoys and then cannot afford the tail. Element order is
    shuffled; each draw is confirmed by building the trace.
    """
    if w < 0 or k < 1 or decoys < 1:
        raise ValueError("need w >= 0, k >= 1 and decoys >= 1")
    rng = np.random.default_rng(seed)
    n = w + 1 + decoys
    for _ in range(max_attempts):
        tail_cost = int(rng.integers(decoys + 1, decoys + 3))
        v_tail = float(rng.uniform(1.2, 2.0))
        core_vals = rng.uniform(4.0, 6.0, size=w)
        # decoy density above the tail's, combined value below it
        lo = v_tail / tail_cost * 1.05
        hi = v_tail / decoys * 0.95
        if lo >= hi:
            continue
        decoy_vals = rng.uniform(lo, hi, size=decoys)
        values = list(core_vals) + [v_tail] + list(decoy_vals)
        costs = [int(c) for c in rng.integers(1, 3, size=w)] + [tail_cost] + [1] * decoys
        perm = rng.permutation(n)
        weights, covers = [], [None] * n
        for slot, src in enumerate(perm):
            v = values[src]
            split = float(rng.uniform(0.3, 0.7))
            base = len(weights)
            weights += [round(v * split, 6), round(v * (1 - split), 6)]
            row = []
            for i in range(k):
                # coordinate 1 covers both private items, the others a random nonempty part
                row.append(0b11 << base if i == 0 else int(rng.choice([1, 2, 3])) << base)
            covers[slot] = tuple(row)
        cov = CoverageSpec(tuple(weights), tuple(covers), tuple(f"u{u + 1}" for u in range(len(weights))))
        spec = cov
        if signed:
            bonus = []
            for _e in range(n):
                depth = float(rng.uniform(0.0, 0.3))
                row = [round(depth + float(rng.uniform(0, 0.3)), 6) for _ in range(k)]
                if k > 1:
                    row[int(rng.integers(k))] = -round(depth, 6)
                bonus.append(tuple(row))
            spec = SignedCoverageSpec(cov, tuple(bonus))
            if not is_nonnegative(spec):
                continue
        c_perm = [costs[src] for src in perm]
        budget = sum(c_perm) - decoys  # room for core + tail, not for the decoys too
        inst = Instance(spec, tuple(c_perm), budget)
        trace = build_greedy_trace(inst, Oracle(inst.spec), w)
        if trace is not None and trace.has_rejection:
            return inst
    raise GenerationError(f"no rejection instance found in {max_attempts} attempts (w={w}, k={k}, seed={seed})")


@dataclass(frozen=True)
class RatioBound:
    lhs: float
    bound1: float   # 1 - (1 - 1/B)^A
    bound2: float   # 1 - e^{-A/B}

    def holds(self, tol: float = 1e-12) -> bool:
        return self.lhs >= self.bound1 - tol and self.bound1 >= self.bound2 - tol


def ratio_lower_bound(rhos, B: int) -> RatioBound:
    """``Σρ / min_s (Σ_{i<s} ρ_i + B·ρ_s)`` against ``1 - (1-1/B)^A`` and ``1 - e^{-A/B}``.

    Requires ``ρ_1 > 0``, the rest nonnegative, and a positive integer ``B``.
    """
    rhos = [float(r) for r in rhos]
    if not rhos:
        raise ValueError("rhos must be nonempty")
    if not rhos[0] > 0:
        raise ValueError(f"the first rho must be positive, got {rhos[0]}")
    if any(r < 0 for r in rhos):
        raise ValueError("rhos must be nonnegative")
    if int(B) != B or B < 1:
        raise ValueError(f"B must be a positive integer, got {B}")
    A = len(rhos)
    prefix, denom = 0.0, math.inf
    for r in rhos:
        denom = min(denom, prefix + B * r)
        prefix += r
    return RatioBound(math.fsum(rhos) / denom, 1 - (1 - 1 / B) ** A, 1 - math.exp(-A / B))
