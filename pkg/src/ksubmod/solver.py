"""Partial-enumeration greedy for k-submodular maximization under a knapsack.

Every affordable seed with ``w`` placed elements is extended greedily by
marginal density (gain per unit cost) until the candidate set is exhausted;
small solutions with fewer than ``w`` elements are scored directly. The best
value seen wins.

Determinism: candidates are scanned by (element, coordinate) ascending and a
later candidate replaces the incumbent only when strictly better, so ties go
to the lowest pair. Seeds are reduced in enumeration order with the same
strict rule, which makes results independent of how the seed list is split
across worker processes.
"""

from __future__ import annotations

import itertools
import math
import multiprocessing
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator

from . import caps
from .functions import Oracle, table_size
from .instance import Instance
from .orthant import Orthant

DENSITY_SLACK = 1e-12
MONOTONE_W = 4
NON_MONOTONE_W = 7


class InfeasibleSeed(ValueError):
    pass


@dataclass(frozen=True)
class SolverConfig:
    """``w=None`` picks 4 for monotone and 7 for non-monotone objectives.

    ``mode="auto"`` runs the verifier on the objective first and lets the
    monotonicity verdict choose. ``strict_paper`` scores only size ``w-1``
    solutions in the direct step instead of every size below ``w``.
    ``best_prefix`` also keeps the best intermediate greedy state.
    ``prefilter`` drops elements costing more than the whole budget up front.
    """

    w: int | None = None
    mode: str = "monotone"
    strict_paper: bool = False
    best_prefix: bool = False
    prefilter: bool = False
    parallel: int = 1
    seed_cap: int | None = None

    def __post_init__(self):
        if self.mode not in ("monotone", "non-monotone", "auto"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.w is not None and self.w < 0:
            raise ValueError("w must be nonnegative")
        if self.parallel < 1:
            raise ValueError("parallel must be >= 1")


@dataclass(frozen=True)
class DensityChoice:
    e: int
    i: int
    density: float
    gain: float
    value: float  # f(x ⊔ I[e, i])


@dataclass(frozen=True)
class GreedyStep:
    e: int
    i: int
    gain: float
    density: float
    accepted: bool


@dataclass
class GreedyRun:
    seed: Orthant
    steps: list[GreedyStep]
    states: list[Orthant]          # s^0, s^1, ... one entry per accepted step
    values: list[float]            # f at each entry of ``states``
    result: Orthant
    value: float


@dataclass
class SolveReport:
    solution: Orthant
    value: float
    oracle_calls: int
    winning_seed: Orthant | None   # None: found by the direct small-solution scan
    w: int
    monotone: bool
    seeds: int
    direct_candidates: int
    wall_time: float = 0.0
    seed_summaries: list[tuple[Orthant, float]] | None = field(default=None, repr=False)

    def to_dict(self, timing: bool = False, ids=None) -> dict:
        d = {
            "value": self.value,
            "solution": list(self.solution.assignment),
            "solution_sets": self.solution.format(ids),
            "oracle_calls": self.oracle_calls,
            "winning_seed": "direct scan"
            if self.winning_seed is None
            else list(self.winning_seed.assignment),
            "w": self.w,
            "mode": "monotone" if self.monotone else "non-monotone",
            "seeds": self.seeds,
            "direct_candidates": self.direct_candidates,
        }
        if timing:
            d["wall_time_s"] = self.wall_time
        return d

    def format(self, ids=None, timing: bool = False) -> str:
        seed = "direct scan" if self.winning_seed is None else self.winning_seed.format(ids)
        lines = [
            f"value:         {self.value!r}",
            f"solution:      {self.solution.format(ids)}",
            f"oracle calls:  {self.oracle_calls}",
            f"winning seed:  {seed}",
            f"w:             {self.w} ({'monotone' if self.monotone else 'non-monotone'})",
            f"seeds:         {self.seeds}",
            f"direct scan:   {self.direct_candidates}",
        ]
        if timing:
            lines.append(f"wall time:     {self.wall_time:.3f}s")
        return "\n".join(lines)


def best_density_pair(
    oracle: Oracle,
    x: Orthant,
    remaining,
    costs,
    base: float | None = None,
) -> DensityChoice | None:
    """Maximize ``Δ_{e,i} f(x) / c_e`` over ``remaining × [k]``.

    Densities are compared cross-multiplied (``Δ·c' > Δ'·c``) with a small
    slack, so equal densities tie and the lowest (element, coordinate) wins.
    """
    cands = sorted(remaining)
    if not cands:
        return None
    xa = x.assignment
    if base is None:
        base = oracle.value_of(xa)
    best = None
    bg = bc = bv = 0
    for e in cands:
        if xa[e]:
            raise ValueError(f"element {e} is already in the support")
        c = costs[e]
        head, tail = xa[:e], xa[e + 1:]
        for i in range(1, x.k + 1):
            v = oracle.value_of(head + (i,) + tail)
            gain = v - base
            if best is None or gain * bc > bg * c + DENSITY_SLACK:
                best, bg, bc, bv = (e, i), gain, c, v
    return DensityChoice(best[0], best[1], bg / bc, bg, bv)


def greedy_extend(
    instance: Instance,
    oracle: Oracle,
    s0: Orthant,
    prefilter: bool = False,
    best_prefix: bool = False,
    candidates=None,
) -> GreedyRun:
    """Extend ``s0`` greedily by marginal density within the budget.

    Each round picks the densest (element, coordinate) pair, places it if it
    still fits, and removes the element from the candidates either way.
    ``candidates`` restricts the initial candidate set (default: everything
    outside ``s0``'s support).
    """
    costs, L = instance.costs, instance.budget
    used = s0.cost(costs)
    if used > L:
        raise InfeasibleSeed(f"seed cost {used} exceeds the budget {L}")
    if candidates is None:
        remaining = {e for e in range(instance.n) if not s0[e]}
    else:
        remaining = {e for e in candidates if not s0[e]}
    if prefilter:
        remaining = {e for e in remaining if costs[e] <= L}
    s = s0
    value = oracle.value_of(s.assignment)
    steps, states, values = [], [s], [value]
    while remaining:
        choice = best_density_pair(oracle, s, remaining, costs, base=value)
        accepted = used + costs[choice.e] <= L
        steps.append(GreedyStep(choice.e, choice.i, choice.gain, choice.density, accepted))
        if accepted:
            s = s.with_element(choice.e, choice.i)
            used += costs[choice.e]
            value = choice.value
            states.append(s)
            values.append(value)
        remaining.discard(choice.e)
    result, result_value = s, value
    if best_prefix:
        j = max(range(len(values)), key=lambda t: (values[t], -t))
        result, result_value = states[j], values[j]
    return GreedyRun(s0, steps, states, values, result, result_value)


def enumerate_seeds(instance: Instance, size: int) -> Iterator[Orthant]:
    """Every affordable orthant with exactly ``size`` placed elements.

    Order: supports as ``itertools.combinations`` of element indices, then
    coordinates in ``itertools.product`` order.
    """
    n, k, costs, L = instance.n, instance.k, instance.costs, instance.budget
    if not 0 <= size <= n:
        return
    for support in itertools.combinations(range(n), size):
        if sum(costs[e] for e in support) > L:
            continue
        for coords in itertools.product(range(1, k + 1), repeat=size):
            a = [0] * n
            for e, i in zip(support, coords):
                a[e] = i
            yield Orthant(tuple(a), k)


def seed_count_bound(n: int, k: int, w: int) -> int:
    """Σ_{m<=w} C(n,m) k^m + C(n,w) k^w, the candidate budget of one solve."""
    return sum(math.comb(n, m) * k**m for m in range(min(w, n) + 1)) + math.comb(n, w) * k**w


def oracle_call_bound(n: int, k: int, w: int) -> int:
    return seed_count_bound(n, k, w) * (n + 1) * (n * k + 2)


def _direct_sizes(w: int, strict: bool) -> list[int]:
    if w < 1:
        return []
    return [w - 1] if strict else list(range(w))


def _resolve_monotone(instance: Instance, config: SolverConfig) -> bool:
    if config.mode != "auto":
        return config.mode == "monotone"
    from .verify import verify

    N = table_size(instance.n, instance.k)
    mode = "exhaustive" if N <= caps.scaled(caps.VERIFY_ORTHANT_CAP) else "sampled"
    report = verify(instance.spec, mode=mode, properties=("monotone",))
    return report.holds("monotone")


def _run_seeds(instance: Instance, seeds: list[Orthant], start: int, config: SolverConfig, oracle=None):
    """Greedy from each seed; returns (best value, best position, best orthant, calls, summaries)."""
    own = oracle is None
    if own:
        oracle = Oracle(instance.spec)
    before = oracle.calls
    best = None
    summaries = []
    for pos, s0 in enumerate(seeds, start=start):
        run = greedy_extend(instance, oracle, s0, prefilter=config.prefilter, best_prefix=config.best_prefix)
        summaries.append(run.value)
        if best is None or run.value > best[0]:
            best = (run.value, pos, run.result)
    return best, oracle.calls - before, summaries


_POOLS: dict[int, ProcessPoolExecutor] = {}


def _pool(workers: int) -> ProcessPoolExecutor:
    pool = _POOLS.get(workers)
    if pool is None:
        try:
            ctx = multiprocessing.get_context("fork")
        except ValueError:
            ctx = None
        pool = _POOLS[workers] = ProcessPoolExecutor(max_workers=workers, mp_context=ctx)
    return pool


def solve(instance: Instance, config: SolverConfig | None = None, oracle: Oracle | None = None) -> SolveReport:
    config = config or SolverConfig()
    t0 = time.perf_counter()
    monotone = _resolve_monotone(instance, config)
    w = config.w if config.w is not None else (MONOTONE_W if monotone else NON_MONOTONE_W)
    n, k = instance.n, instance.k
    cap = caps.scaled(caps.SEED_CAP) if config.seed_cap is None else config.seed_cap
    bound = seed_count_bound(n, k, w)
    if bound > cap:
        raise caps.CapExceeded(f"w={w} needs up to {bound} candidates for n={n}, k={k}; cap is {cap}")
    oracle = oracle or Oracle(instance.spec)
    calls0 = oracle.calls

    best_value, best, best_seed = None, None, None
    direct = 0
    for size in _direct_sizes(w, config.strict_paper):
        for x in enumerate_seeds(instance, size):
            direct += 1
            v = oracle.value_of(x.assignment)
            if best_value is None or v > best_value:
                best_value, best = v, x

    seeds = list(enumerate_seeds(instance, w)) if w <= n else []
    summaries: list[float] = []
    if seeds:
        if config.parallel == 1 or len(seeds) < 2 * config.parallel:
            results = [_run_seeds(instance, seeds, 0, config, oracle)]
            extra_calls = 0
        else:
            chunks = _chunks(len(seeds), config.parallel * 4)
            pool = _pool(config.parallel)
            futures = [pool.submit(_run_seeds, instance, seeds[a:b], a, config) for a, b in chunks]
            results = [f.result() for f in futures]
            extra_calls = sum(r[1] for r in results)
        for (value, pos, orth), _, vals in results:
            summaries.extend(vals)
            if best_value is None or value > best_value:
                best_value, best, best_seed = value, orth, seeds[pos]
        oracle.add_calls(extra_calls)

    if best is None:
        best = instance.empty()
        best_value = oracle.value_of(best.assignment)

    assert instance.feasible(best)
    assert instance.spec.value(best.assignment) == best_value
    return SolveReport(
        solution=best,
        value=best_value,
        oracle_calls=oracle.calls - calls0,
        winning_seed=best_seed,
        w=w,
        monotone=monotone,
        seeds=len(seeds),
        direct_candidates=direct,
        wall_time=time.perf_counter() - t0,
        seed_summaries=list(zip(seeds, summaries)),
    )


def _chunks(total: int, parts: int) -> list[tuple[int, int]]:
    parts = max(1, min(parts, total))
    size, extra = divmod(total, parts)
    out, a = [], 0
    for p in range(parts):
        b = a + size + (1 if p < extra else 0)
        out.append((a, b))
        a = b
    return out
