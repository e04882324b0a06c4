"""Ground-truth optimum by exhaustive enumeration of every orthant."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import caps
from .functions import Oracle, decode, radix_weights, table_size
from .instance import Instance
from .orthant import Orthant


@dataclass(frozen=True)
class OptResult:
    orthant: Orthant
    value: float
    feasible_count: int
    size: int | None = None  # support size restriction, if any

    @property
    def r(self) -> int:
        return self.orthant.size()


def brute_force_opt(
    instance: Instance,
    size: int | None = None,
    oracle: Oracle | None = None,
    cap: int | None = None,
) -> OptResult:
    """Maximize f over every affordable orthant (optionally with exactly ``size`` elements).

    Orthants are visited in mixed-radix order, base k+1, element 0 most
    significant; the first maximum wins ties. Refuses rather than
    approximates beyond ``cap``.
    """
    n, k = instance.n, instance.k
    N = table_size(n, k)
    cap = caps.scaled(caps.BRUTE_FORCE_CAP) if cap is None else cap
    if N > cap:
        raise caps.CapExceeded(f"(k+1)^n = {N} exceeds the brute-force cap {cap} (n={n}, k={k})")
    oracle = oracle or Oracle(instance.spec, memoize=False)

    w = radix_weights(n, k)
    codes = np.arange(N, dtype=np.int64)
    placed = ((codes[:, None] // w[None, :]) % (k + 1)) > 0
    keep = placed @ np.asarray(instance.costs, dtype=np.int64) <= instance.budget
    if size is not None:
        keep &= placed.sum(axis=1) == size
    feasible = np.flatnonzero(keep)
    if feasible.size == 0:
        raise ValueError(f"no orthant with exactly {size} elements fits the budget {instance.budget}")

    best_code, best_value = None, None
    for code in feasible.tolist():
        v = oracle.value_of(decode(code, n, k))
        if best_value is None or v > best_value:
            best_code, best_value = code, v
    return OptResult(Orthant(decode(best_code, n, k), k), best_value, int(feasible.size), size)
