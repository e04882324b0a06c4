"""k-submodular function families and the call-counting evaluation oracle.

Three families share one small interface (``n``, ``k``, ``kind`` and
``value(assignment)``):

* :class:`TableSpec` -- an explicit value for every orthant.
* :class:`CoverageSpec` -- weighted coverage; element ``e`` placed in
  coordinate ``i`` covers the universe items in ``T(e, i)``.  Monotone.
* :class:`SignedCoverageSpec` -- coverage plus a constant bonus
  ``b[e][i]`` per placed element.  With ``b[e][i] + b[e][j] >= 0`` for
  ``i != j`` the result stays k-submodular but may lose monotonicity.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field
from typing import Iterator, Protocol, Sequence

import numpy as np

from .orthant import Orthant, OrthantError


class SpecError(ValueError):
    pass


class FunctionSpec(Protocol):
    kind: str

    @property
    def n(self) -> int: ...

    @property
    def k(self) -> int: ...

    def value(self, assignment: Sequence[int]) -> float: ...


def table_size(n: int, k: int) -> int:
    return (k + 1) ** n


def radix_weights(n: int, k: int) -> np.ndarray:
    """Place values of the mixed-radix code; element 0 is the most significant digit."""
    return np.array([(k + 1) ** (n - 1 - e) for e in range(n)], dtype=np.int64)


def encode(assignment: Sequence[int], k: int) -> int:
    code = 0
    for a in assignment:
        code = code * (k + 1) + a
    return code


def decode(code: int, n: int, k: int) -> tuple[int, ...]:
    out = [0] * n
    for e in range(n - 1, -1, -1):
        code, out[e] = divmod(code, k + 1)
    return tuple(out)


def all_assignments(n: int, k: int) -> Iterator[tuple[int, ...]]:
    """Every assignment vector in code order (lexicographic, element 0 first)."""
    return itertools.product(range(k + 1), repeat=n)


@dataclass(frozen=True)
class TableSpec:
    n_elements: int
    coords: int
    values: tuple[float, ...]
    kind: str = field(default="table", init=False)

    def __post_init__(self):
        if self.coords < 1:
            raise SpecError("k must be positive")
        expected = table_size(self.n_elements, self.coords)
        if len(self.values) != expected:
            raise SpecError(f"expected {expected} values, got {len(self.values)}")
        vals = tuple(float(v) for v in self.values)
        if any(not np.isfinite(v) or v < 0 for v in vals):
            raise SpecError("table values must be finite and nonnegative")
        object.__setattr__(self, "values", vals)

    @property
    def n(self) -> int:
        return self.n_elements

    @property
    def k(self) -> int:
        return self.coords

    def value(self, assignment: Sequence[int]) -> float:
        return self.values[encode(assignment, self.coords)]

    def replace_value(self, assignment: Sequence[int], new_value: float) -> "TableSpec":
        vals = list(self.values)
        vals[encode(assignment, self.coords)] = new_value
        return TableSpec(self.n_elements, self.coords, tuple(vals))


@dataclass(frozen=True)
class CoverageSpec:
    """Weighted coverage.

    ``covers[e][i - 1]`` is a bitmask over the universe: bit ``u`` is set when
    placing element ``e`` in coordinate ``i`` covers universe item ``u``.
    """

    weights: tuple[float, ...]
    covers: tuple[tuple[int, ...], ...]
    universe_ids: tuple[str, ...] | None = None
    kind: str = field(default="coverage", init=False)
    _mask_cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        weights = tuple(float(w) for w in self.weights)
        if any(not np.isfinite(w) or w < 0 for w in weights):
            raise SpecError("universe weights must be finite and nonnegative")
        object.__setattr__(self, "weights", weights)
        if not self.covers:
            raise SpecError("coverage needs at least one element")
        k = len(self.covers[0])
        if k < 1:
            raise SpecError("k must be positive")
        limit = 1 << len(weights)
        for e, row in enumerate(self.covers):
            if len(row) != k:
                raise SpecError(f"element {e} has {len(row)} coordinates, expected {k}")
            for m in row:
                if not 0 <= m < limit:
                    raise SpecError(f"element {e} covers items outside the universe")
        if self.universe_ids is not None and len(self.universe_ids) != len(weights):
            raise SpecError("universe_ids and weights differ in length")

    @property
    def n(self) -> int:
        return len(self.covers)

    @property
    def k(self) -> int:
        return len(self.covers[0])

    def covered(self, assignment: Sequence[int]) -> int:
        mask = 0
        for e, a in enumerate(assignment):
            if a:
                mask |= self.covers[e][a - 1]
        return mask

    def mask_weight(self, mask: int) -> float:
        w = self._mask_cache.get(mask)
        if w is None:
            w = 0.0
            u, m = 0, mask
            while m:
                if m & 1:
                    w += self.weights[u]
                m >>= 1
                u += 1
            self._mask_cache[mask] = w
        return w

    def value(self, assignment: Sequence[int]) -> float:
        return self.mask_weight(self.covered(assignment))

    def covered_sets(self) -> list[list[frozenset[int]]]:
        return [
            [frozenset(u for u in range(len(self.weights)) if m >> u & 1) for m in row]
            for row in self.covers
        ]

    def __getstate__(self):
        state = dict(self.__dict__)
        state["_mask_cache"] = {}
        return state

    def __setstate__(self, state):
        self.__dict__.update(state)


@dataclass(frozen=True)
class SignedCoverageSpec:
    coverage: CoverageSpec
    bonus: tuple[tuple[float, ...], ...]
    kind: str = field(default="coverage_signed", init=False)

    def __post_init__(self):
        bonus = tuple(tuple(float(b) for b in row) for row in self.bonus)
        if len(bonus) != self.coverage.n:
            raise SpecError("one bonus row per element is required")
        for e, row in enumerate(bonus):
            if len(row) != self.coverage.k:
                raise SpecError(f"element {e} has {len(row)} bonuses, expected {self.coverage.k}")
            if any(not np.isfinite(b) for b in row):
                raise SpecError(f"element {e} has a non-finite bonus")
            for i, j in itertools.combinations(range(len(row)), 2):
                if row[i] + row[j] < 0:
                    raise SpecError(
                        f"element {e}: bonuses {row[i]} (coordinate {i + 1}) and "
                        f"{row[j]} (coordinate {j + 1}) sum below zero"
                    )
        object.__setattr__(self, "bonus", bonus)

    @property
    def n(self) -> int:
        return self.coverage.n

    @property
    def k(self) -> int:
        return self.coverage.k

    def value(self, assignment: Sequence[int]) -> float:
        v = self.coverage.value(assignment)
        for e, a in enumerate(assignment):
            if a:
                v += self.bonus[e][a - 1]
        return v


def value_array(spec: FunctionSpec) -> np.ndarray:
    """f at every orthant, indexed by mixed-radix code. Not counted by any oracle."""
    if isinstance(spec, TableSpec):
        return np.asarray(spec.values, dtype=float)
    return np.fromiter(
        (spec.value(a) for a in all_assignments(spec.n, spec.k)),
        dtype=float,
        count=table_size(spec.n, spec.k),
    )


def tabulate(spec: FunctionSpec) -> TableSpec:
    if isinstance(spec, TableSpec):
        return spec
    return TableSpec(spec.n, spec.k, tuple(value_array(spec).tolist()))


class Oracle:
    """Evaluates a spec and counts every evaluation request.

    Values are memoised per assignment, which saves work but not calls:
    the counter advances by one on every :meth:`evaluate`.
    """

    def __init__(self, spec: FunctionSpec, memoize: bool = True):
        self.spec = spec
        self.calls = 0
        self._lock = threading.Lock()
        self._memo: dict[tuple[int, ...], float] | None = {} if memoize else None

    def value_of(self, assignment: tuple[int, ...]) -> float:
        with self._lock:
            self.calls += 1
        if self._memo is None:
            return self.spec.value(assignment)
        v = self._memo.get(assignment)
        if v is None:
            v = self._memo[assignment] = self.spec.value(assignment)
        return v

    def evaluate(self, x: Orthant) -> float:
        if x.n != self.spec.n or x.k != self.spec.k:
            raise OrthantError(
                f"orthant over (n={x.n}, k={x.k}) does not match function over "
                f"(n={self.spec.n}, k={self.spec.k})"
            )
        return self.value_of(x.assignment)

    __call__ = evaluate

    def add_calls(self, count: int):
        with self._lock:
            self.calls += count


def evaluate(oracle: Oracle, x: Orthant) -> float:
    return oracle.evaluate(x)


def marginal_gain(oracle: Oracle, x: Orthant, e: int, i: int, base: float | None = None) -> float:
    """``f(x ⊔ I[e, i]) - f(x)``; pass ``base = f(x)`` to save one evaluation."""
    if x[e]:
        raise OrthantError(f"element {e} is already in the support")
    y = x.with_element(e, i)
    if base is None:
        base = oracle.evaluate(x)
    return oracle.evaluate(y) - base


def min_value(spec: FunctionSpec) -> tuple[float, tuple[int, ...]]:
    vals = value_array(spec)
    idx = int(np.argmin(vals))
    return float(vals[idx]), decode(idx, spec.n, spec.k)
