"""Orthants of (k+1)^E: k-tuples of pairwise disjoint subsets of an ordered ground set.

An orthant is stored as an assignment vector: position ``e`` holds the
coordinate (1..k) element ``e`` is placed in, or 0 when it is unassigned.
Disjointness of the k subsets therefore holds by construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


class OrthantError(ValueError):
    pass


@dataclass(frozen=True, slots=True)
class Orthant:
    assignment: tuple[int, ...]
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise OrthantError(f"k must be positive, got {self.k}")
        if not isinstance(self.assignment, tuple):
            object.__setattr__(self, "assignment", tuple(int(a) for a in self.assignment))
        for e, a in enumerate(self.assignment):
            if not 0 <= a <= self.k:
                raise OrthantError(f"element {e} has coordinate {a} outside [0, {self.k}]")

    @classmethod
    def empty(cls, n: int, k: int) -> "Orthant":
        return cls((0,) * n, k)

    @classmethod
    def from_sets(cls, sets: Sequence[Iterable[int]], n: int) -> "Orthant":
        """Build from explicit subsets ``(X_1, ..., X_k)`` of element indices."""
        k = len(sets)
        assignment = [0] * n
        for i, members in enumerate(sets, start=1):
            for e in members:
                if not 0 <= e < n:
                    raise OrthantError(f"unknown element {e}")
                if assignment[e]:
                    raise OrthantError(f"element {e} appears in X_{assignment[e]} and X_{i}")
                assignment[e] = i
        return cls(tuple(assignment), k)

    @property
    def n(self) -> int:
        return len(self.assignment)

    def __getitem__(self, e: int) -> int:
        return self.assignment[e]

    def sets(self) -> tuple[frozenset[int], ...]:
        """The explicit k-tuple ``(X_1, ..., X_k)``."""
        out = [set() for _ in range(self.k)]
        for e, a in enumerate(self.assignment):
            if a:
                out[a - 1].add(e)
        return tuple(frozenset(s) for s in out)

    def support(self) -> frozenset[int]:
        return frozenset(e for e, a in enumerate(self.assignment) if a)

    def size(self) -> int:
        return sum(1 for a in self.assignment if a)

    def cost(self, costs: Sequence[int]) -> int:
        return sum(costs[e] for e, a in enumerate(self.assignment) if a)

    def _check_compatible(self, other: "Orthant"):
        if self.k != other.k or self.n != other.n:
            raise OrthantError(
                f"incompatible orthants: (n={self.n}, k={self.k}) vs (n={other.n}, k={other.k})"
            )

    def join(self, other: "Orthant") -> "Orthant":
        self._check_compatible(other)
        out = []
        for a, b in zip(self.assignment, other.assignment):
            if a == b or not b:
                out.append(a)
            elif not a:
                out.append(b)
            else:
                out.append(0)  # two different nonzero coordinates cancel
        return Orthant(tuple(out), self.k)

    def meet(self, other: "Orthant") -> "Orthant":
        self._check_compatible(other)
        return Orthant(
            tuple(a if a == b else 0 for a, b in zip(self.assignment, other.assignment)), self.k
        )

    def precedes(self, other: "Orthant") -> bool:
        self._check_compatible(other)
        return all(not a or a == b for a, b in zip(self.assignment, other.assignment))

    def override_with(self, q: "Orthant") -> "Orthant":
        """``join(join(self, q), q)``: conflicts resolve to ``q``'s coordinate."""
        self._check_compatible(q)
        return Orthant(
            tuple(b if b else a for a, b in zip(self.assignment, q.assignment)), self.k
        )

    def with_element(self, e: int, i: int) -> "Orthant":
        """``self ⊔ I[e, i]`` for an unassigned ``e``."""
        if self.assignment[e]:
            raise OrthantError(f"element {e} is already assigned to coordinate {self.assignment[e]}")
        if not 1 <= i <= self.k:
            raise OrthantError(f"coordinate {i} outside [1, {self.k}]")
        a = list(self.assignment)
        a[e] = i
        return Orthant(tuple(a), self.k)

    def without(self, e: int) -> "Orthant":
        a = list(self.assignment)
        a[e] = 0
        return Orthant(tuple(a), self.k)

    def minus(self, other: "Orthant") -> "Orthant":
        """Drop every element of ``other``'s support (the ``x \\ s`` of set notation)."""
        self._check_compatible(other)
        return Orthant(
            tuple(0 if b else a for a, b in zip(self.assignment, other.assignment)), self.k
        )

    def format(self, names: Sequence[str] | None = None) -> str:
        names = names or [f"e{e + 1}" for e in range(self.n)]
        parts = []
        for s in self.sets():
            parts.append("{" + ",".join(names[e] for e in sorted(s)) + "}" if s else "∅")
        return "(" + ", ".join(parts) + ")"

    def __str__(self):
        return self.format()


def make_singleton(n: int, k: int, e: int, i: int) -> Orthant:
    """The orthant ``I[e, i]`` holding only element ``e`` in coordinate ``i``."""
    if not 0 <= e < n:
        raise OrthantError(f"unknown element {e}")
    if not 1 <= i <= k:
        raise OrthantError(f"coordinate {i} outside [1, {k}]")
    return Orthant.empty(n, k).with_element(e, i)


def join(x: Orthant, y: Orthant) -> Orthant:
    return x.join(y)


def meet(x: Orthant, y: Orthant) -> Orthant:
    return x.meet(y)


def precedes(x: Orthant, y: Orthant) -> bool:
    return x.precedes(y)


def override_with(x: Orthant, q: Orthant) -> Orthant:
    return x.override_with(q)


def support(x: Orthant) -> frozenset[int]:
    return x.support()


def cost(x: Orthant, costs: Sequence[int]) -> int:
    return x.cost(costs)
