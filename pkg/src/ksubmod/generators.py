"""Seeded instance generators.

Coverage instances model k sensor types over n candidate sites: placing the
site ``e`` sensor of type ``i`` observes the targets ``T(e, i)``.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from . import caps
from .functions import (
    CoverageSpec,
    SignedCoverageSpec,
    SpecError,
    TableSpec,
    table_size,
    tabulate,
    value_array,
)
from .instance import Instance
from .verify import _Grid


class GenerationError(RuntimeError):
    pass


def budget_from_rule(rule, costs: Sequence[int]) -> int:
    """``"half"`` -> ceil(total/2), ``"total"``, a float fraction of the total, or an int."""
    total = sum(costs)
    if rule == "half":
        return math.ceil(total / 2)
    if rule == "total":
        return total
    if isinstance(rule, str):
        try:
            rule = float(rule) if "." in rule else int(rule)
        except ValueError:
            raise ValueError(f"unknown budget rule {rule!r}") from None
    if isinstance(rule, float):
        if not 0 <= rule:
            raise ValueError(f"budget fraction must be nonnegative, got {rule}")
        return math.ceil(rule * total)
    if isinstance(rule, (int, np.integer)) and rule >= 0:
        return int(rule)
    raise ValueError(f"unknown budget rule {rule!r}")


def _check_sizes(n, k, universe_size, cost_range):
    if n < 1 or k < 1 or universe_size < 1:
        raise ValueError(f"n, k and universe_size must be >= 1 (got n={n}, k={k}, universe_size={universe_size})")
    lo, hi = cost_range
    if lo < 1 or hi < lo:
        raise ValueError(f"cost range must satisfy 1 <= lo <= hi, got {cost_range}")


def _coverage(rng, n, k, universe_size, density):
    weights = np.round(rng.uniform(0.1, 1.0, size=universe_size), 6)
    covers = []
    for _ in range(n):
        row = []
        for _ in range(k):
            hit = rng.random(universe_size) < density
            if not hit.any():
                hit[rng.integers(universe_size)] = True
            row.append(int(sum(1 << int(u) for u in np.flatnonzero(hit))))
        covers.append(tuple(row))
    return CoverageSpec(tuple(weights.tolist()), tuple(covers), tuple(f"u{u + 1}" for u in range(universe_size)))


def gen_coverage(
    n: int,
    k: int,
    universe_size: int,
    cost_range: tuple[int, int] = (1, 5),
    budget_rule="half",
    seed: int = 0,
    density: float = 0.2,
) -> Instance:
    _check_sizes(n, k, universe_size, cost_range)
    rng = np.random.default_rng(seed)
    spec = _coverage(rng, n, k, universe_size, density)
    costs = tuple(int(c) for c in rng.integers(cost_range[0], cost_range[1] + 1, size=n))
    return Instance(spec, costs, budget_from_rule(budget_rule, costs))


def _draw_bonuses(rng, n, k, magnitude):
    rows = []
    for _ in range(n):
        row = rng.uniform(0.0, magnitude, size=k)
        if k == 1 or rng.random() < 0.6:
            j = int(rng.integers(k))
            # one negative coordinate, never larger in size than any other bonus
            depth = float(rng.uniform(0.0, magnitude))
            row = depth + rng.uniform(0.0, magnitude, size=k) if k > 1 else row
            row[j] = -depth
        rows.append(tuple(float(round(b, 6)) for b in row))
    return tuple(rows)


def gen_signed_coverage(
    n: int,
    k: int,
    universe_size: int,
    cost_range: tuple[int, int] = (1, 5),
    budget_rule="half",
    bonus_magnitude: float = 1.0,
    seed: int = 0,
    density: float = 0.2,
    max_attempts: int = 500,
    cap: int | None = None,
) -> Instance:
    """Coverage plus per-placement bonuses; resampled until nonnegative and non-monotone."""
    _check_sizes(n, k, universe_size, cost_range)
    if bonus_magnitude <= 0:
        raise ValueError("bonus_magnitude must be positive")
    cap = caps.scaled(caps.VERIFY_ORTHANT_CAP) if cap is None else cap
    if table_size(n, k) > cap:
        raise caps.CapExceeded(f"(k+1)^n = {table_size(n, k)} exceeds the cap {cap} (n={n}, k={k})")
    rng = np.random.default_rng(seed)
    base = _coverage(rng, n, k, universe_size, density)
    costs = tuple(int(c) for c in rng.integers(cost_range[0], cost_range[1] + 1, size=n))
    budget = budget_from_rule(budget_rule, costs)
    for _ in range(max_attempts):
        spec = SignedCoverageSpec(base, _draw_bonuses(rng, n, k, bonus_magnitude))
        if is_nonnegative(spec) and not is_monotone(spec):
            return Instance(spec, costs, budget)
    raise GenerationError(
        f"no nonnegative non-monotone bonus draw in {max_attempts} attempts "
        f"(n={n}, k={k}, bonus_magnitude={bonus_magnitude}, seed={seed})"
    )


def is_nonnegative(spec) -> bool:
    return float(value_array(spec).min()) >= 0.0


def is_monotone(spec, tol: float = 1e-9) -> bool:
    g = _Grid(spec)
    for e in range(g.n):
        xs = g.free(e)
        for i in range(1, g.k + 1):
            if (g.vals[xs + i * g.w[e]] - g.vals[xs] < -tol).any():
                return False
    return True


def gen_table(base: Instance, cap: int | None = None) -> Instance:
    """Tabulate ``base``'s function; the table agrees with it pointwise."""
    cap = caps.scaled(caps.VERIFY_ORTHANT_CAP) if cap is None else cap
    if table_size(base.n, base.k) > cap:
        raise caps.CapExceeded(f"(k+1)^n = {table_size(base.n, base.k)} exceeds the cap {cap}")
    return Instance(tabulate(base.spec), base.costs, base.budget, base.ids)


def mutate_table(inst: Instance, assignment: Sequence[int], new_value: float) -> Instance:
    if not isinstance(inst.spec, TableSpec):
        raise SpecError("mutate_table needs a table instance")
    return Instance(inst.spec.replace_value(assignment, new_value), inst.costs, inst.budget, inst.ids)


def random_table(n: int, k: int, seed: int = 0, scale: float = 10.0) -> TableSpec:
    """Independent uniform values; almost never k-submodular."""
    rng = np.random.default_rng(seed)
    vals = np.round(rng.uniform(0.0, scale, size=table_size(n, k)), 6)
    return TableSpec(n, k, tuple(vals.tolist()))
