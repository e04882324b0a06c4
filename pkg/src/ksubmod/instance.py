from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .functions import FunctionSpec, SpecError
from .orthant import Orthant


@dataclass(frozen=True)
class Instance:
    """A knapsack-constrained k-submodular maximization problem.

    Element identity is its position ``0..n-1``; ``ids`` only carries display
    and file names. Costs must be integers ``>= 1`` because the greedy ranks
    candidates by gain per unit cost.
    """

    spec: FunctionSpec
    costs: tuple[int, ...]
    budget: int
    ids: tuple[str, ...] | None = None

    def __post_init__(self):
        costs = tuple(self.costs)
        if len(costs) != self.spec.n:
            raise SpecError(f"{len(costs)} costs for {self.spec.n} elements")
        ids = self.ids if self.ids is not None else tuple(f"e{e + 1}" for e in range(len(costs)))
        ids = tuple(str(s) for s in ids)
        if len(ids) != len(costs):
            raise SpecError(f"{len(ids)} element ids for {len(costs)} elements")
        if len(set(ids)) != len(ids):
            raise SpecError("element ids must be unique")
        for name, c in zip(ids, costs):
            if int(c) != c or c < 1:
                raise SpecError(f"element {name!r} has cost {c}; costs must be integers >= 1")
        if int(self.budget) != self.budget or self.budget < 0:
            raise SpecError(f"budget must be a nonnegative integer, got {self.budget}")
        object.__setattr__(self, "costs", tuple(int(c) for c in costs))
        object.__setattr__(self, "budget", int(self.budget))
        object.__setattr__(self, "ids", ids)

    @property
    def n(self) -> int:
        return self.spec.n

    @property
    def k(self) -> int:
        return self.spec.k

    def empty(self) -> Orthant:
        return Orthant.empty(self.n, self.k)

    def cost(self, x: Orthant) -> int:
        return x.cost(self.costs)

    def feasible(self, x: Orthant) -> bool:
        return x.cost(self.costs) <= self.budget

    def total_cost(self) -> int:
        return sum(self.costs)

    def orthant(self, mapping: dict[str, int] | Sequence[int]) -> Orthant:
        """Orthant from ``{element id: coordinate}`` or a full assignment vector."""
        if isinstance(mapping, dict):
            a = [0] * self.n
            index = {name: e for e, name in enumerate(self.ids)}
            for name, i in mapping.items():
                a[index[name]] = i
            return Orthant(tuple(a), self.k)
        return Orthant(tuple(mapping), self.k)

    def format(self, x: Orthant) -> str:
        return x.format(self.ids)
