"""Property verifier for k-submodular functions.

Four properties are checked independently:

``orthant_submodular``
    ``Δ_{e,i} f(x) >= Δ_{e,i} f(y)`` whenever ``x ⪯ y`` and ``e ∉ P(y)``.
``pairwise_monotone``
    ``Δ_{e,i} f(x) + Δ_{e,j} f(x) >= 0`` for distinct ``i, j``.
``k_submodular``
    the defining inequality ``f(x) + f(y) >= f(x ⊔ y) + f(x ⊓ y)``.
``monotone``
    ``f(x) <= f(y)`` whenever ``x ⪯ y``.

The third is evaluated directly from join and meet, so in exhaustive mode it
cross-checks the first two: it holds exactly when both of them hold.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from . import caps
from .functions import FunctionSpec, decode, radix_weights, table_size, value_array
from .orthant import Orthant

TOL = 1e-9
PROPERTIES = ("orthant_submodular", "pairwise_monotone", "k_submodular", "monotone")

# Above this many comparable pairs per element the diminishing-returns check
# falls back to covering pairs (y = x plus one element), which is equivalent
# by transitivity along chains.
FULL_PAIR_LIMIT = 2**22


@dataclass
class Verdict:
    status: str  # "holds" | "fails" | "not-checked"
    witness: dict | None = None

    def __post_init__(self):
        if self.status == "fails" and not self.witness:
            raise ValueError("a failing verdict needs a witness")


@dataclass
class VerificationReport:
    verdicts: dict[str, Verdict]
    mode: str  # "exhaustive" | "sampled"
    samples: int | None = None
    seed: int | None = None
    k: int = 1
    checked_pairs: dict[str, int] = field(default_factory=dict)

    def holds(self, prop: str) -> bool:
        return self.verdicts[prop].status == "holds"

    def fails(self, prop: str) -> bool:
        return self.verdicts[prop].status == "fails"

    @property
    def characterization_consistent(self) -> bool | None:
        """Whether the join/meet verdict matches orthant-submodular ∧ pairwise-monotone."""
        v = self.verdicts
        if any(v[p].status == "not-checked" for p in PROPERTIES[:3]):
            return None
        return self.holds("k_submodular") == (
            self.holds("orthant_submodular") and self.holds("pairwise_monotone")
        )

    def any_failed(self) -> bool:
        return any(v.status == "fails" for v in self.verdicts.values())

    def format(self, names=None) -> str:
        head = self.mode if self.mode == "exhaustive" else f"sampled({self.samples}, seed={self.seed})"
        lines = [f"verification mode: {head}"]
        for prop in PROPERTIES:
            v = self.verdicts[prop]
            lines.append(f"  {prop:<20} {v.status}")
            if v.witness:
                lines.append("    witness: " + _format_witness(v.witness, names))
        return "\n".join(lines)

    def to_dict(self) -> dict:
        def enc(w):
            if w is None:
                return None
            return {
                key: (list(val.assignment) if isinstance(val, Orthant) else val)
                for key, val in w.items()
            }

        return {
            "mode": self.mode,
            "samples": self.samples,
            "seed": self.seed,
            "verdicts": {p: {"status": v.status, "witness": enc(v.witness)} for p, v in self.verdicts.items()},
        }


def _format_witness(w: dict, names) -> str:
    parts = []
    for key, val in w.items():
        if isinstance(val, Orthant):
            parts.append(f"{key}={val.format(names)}")
        elif key in ("e",) and names is not None:
            parts.append(f"{key}={names[val]}")
        elif key == "e":
            parts.append(f"{key}=e{val + 1}")
        elif isinstance(val, float):
            parts.append(f"{key}={val:.12g}")
        else:
            parts.append(f"{key}={val}")
    return ", ".join(parts)


def verify(
    spec: FunctionSpec,
    mode: str = "exhaustive",
    samples: int = 10_000,
    seed: int = 0,
    properties: Iterable[str] = PROPERTIES,
    tol: float = TOL,
    cap: int | None = None,
    pair_cap: int | None = None,
) -> VerificationReport:
    props = tuple(properties)
    for p in props:
        if p not in PROPERTIES:
            raise ValueError(f"unknown property {p!r}")
    if mode == "exhaustive":
        return _verify_exhaustive(spec, props, tol, cap, pair_cap)
    if mode in ("sampled", "sample"):
        return _verify_sampled(spec, props, samples, seed, tol)
    raise ValueError(f"unknown verification mode {mode!r}")


# -- exhaustive ---------------------------------------------------------------


class _Grid:
    def __init__(self, spec: FunctionSpec):
        self.n, self.k = spec.n, spec.k
        self.N = table_size(self.n, self.k)
        self.w = radix_weights(self.n, self.k)
        self.codes = np.arange(self.N, dtype=np.int64)
        self.digits = ((self.codes[:, None] // self.w[None, :]) % (self.k + 1)).astype(np.int8)
        self.vals = value_array(spec)

    def orthant(self, code) -> Orthant:
        return Orthant(decode(int(code), self.n, self.k), self.k)

    def free(self, e: int) -> np.ndarray:
        """Codes of every orthant leaving element ``e`` unassigned."""
        return self.codes[self.digits[:, e] == 0]


def _verify_exhaustive(spec, props, tol, cap, pair_cap) -> VerificationReport:
    cap = caps.scaled(caps.VERIFY_ORTHANT_CAP) if cap is None else cap
    pair_cap = caps.scaled(caps.VERIFY_PAIR_CAP) if pair_cap is None else pair_cap
    N = table_size(spec.n, spec.k)
    if N > cap:
        raise caps.CapExceeded(f"(k+1)^n = {N} exceeds the exhaustive cap {cap} (n={spec.n}, k={spec.k})")
    if "k_submodular" in props and N * N > pair_cap:
        raise caps.CapExceeded(
            f"{N * N} orthant pairs exceed the pair cap {pair_cap} (n={spec.n}, k={spec.k})"
        )
    g = _Grid(spec)
    checks = {
        "orthant_submodular": _exh_orthant_submodular,
        "pairwise_monotone": _exh_pairwise_monotone,
        "k_submodular": _exh_definition,
        "monotone": _exh_monotone,
    }
    verdicts = {p: (checks[p](g, tol) if p in props else Verdict("not-checked")) for p in PROPERTIES}
    return VerificationReport(verdicts, "exhaustive", k=spec.k)


def _exh_monotone(g: _Grid, tol: float) -> Verdict:
    best = None
    for e in range(g.n):
        xs = g.free(e)
        for i in range(1, g.k + 1):
            gain = g.vals[xs + i * g.w[e]] - g.vals[xs]
            bad = np.flatnonzero(gain < -tol)
            if bad.size:
                cand = (int(xs[bad[0]]), e, i)
                if best is None or cand < best:
                    best = cand
    if best is None:
        return Verdict("holds")
    code, e, i = best
    x = g.orthant(code)
    lo, hi = float(g.vals[code]), float(g.vals[code + i * g.w[e]])
    return Verdict("fails", {"x": x, "e": e, "i": i, "f(x)": lo, "f(x+I[e,i])": hi})


def _exh_pairwise_monotone(g: _Grid, tol: float) -> Verdict:
    best = None
    for e in range(g.n):
        xs = g.free(e)
        gains = [g.vals[xs + i * g.w[e]] - g.vals[xs] for i in range(1, g.k + 1)]
        for i in range(g.k):
            for j in range(i + 1, g.k):
                bad = np.flatnonzero(gains[i] + gains[j] < -tol)
                if bad.size:
                    cand = (int(xs[bad[0]]), e, i + 1, j + 1, float(gains[i][bad[0]]), float(gains[j][bad[0]]))
                    if best is None or cand[:4] < best[:4]:
                        best = cand
    if best is None:
        return Verdict("holds")
    code, e, i, j, di, dj = best
    return Verdict(
        "fails",
        {"x": g.orthant(code), "e": e, "i": i, "j": j, "gain_i": di, "gain_j": dj, "lhs": di + dj, "rhs": 0.0},
    )


def _comparable_pairs(g: _Grid, e: int) -> tuple[np.ndarray, np.ndarray]:
    """All (x, y) with x ⪯ y and x_e = y_e = 0, as code arrays."""
    xs = np.zeros(1, dtype=np.int64)
    ys = np.zeros(1, dtype=np.int64)
    for d in range(g.n):
        if d == e:
            continue
        ox = [0] + [0] * g.k + [c * g.w[d] for c in range(1, g.k + 1)]
        oy = [0] + [c * g.w[d] for c in range(1, g.k + 1)] * 2
        xs = (xs[:, None] + np.asarray(ox)[None, :]).ravel()
        ys = (ys[:, None] + np.asarray(oy)[None, :]).ravel()
    return xs, ys


def _covering_pairs(g: _Grid, e: int) -> tuple[np.ndarray, np.ndarray]:
    """(x, x ⊔ I[d, c]) for every free d != e and c; equivalent to all pairs by chaining."""
    xs_all, ys_all = [], []
    free_e = g.digits[:, e] == 0
    for d in range(g.n):
        if d == e:
            continue
        xs = g.codes[free_e & (g.digits[:, d] == 0)]
        for c in range(1, g.k + 1):
            xs_all.append(xs)
            ys_all.append(xs + c * g.w[d])
    if not xs_all:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
    return np.concatenate(xs_all), np.concatenate(ys_all)


def _exh_orthant_submodular(g: _Grid, tol: float) -> Verdict:
    best = None
    full = (2 * g.k + 1) ** max(g.n - 1, 0) <= FULL_PAIR_LIMIT
    for e in range(g.n):
        xs, ys = _comparable_pairs(g, e) if full else _covering_pairs(g, e)
        for i in range(1, g.k + 1):
            step = i * g.w[e]
            dx = g.vals[xs + step] - g.vals[xs]
            dy = g.vals[ys + step] - g.vals[ys]
            bad = np.flatnonzero(dx < dy - tol)
            if bad.size:
                order = np.lexsort((ys[bad], xs[bad]))
                b = bad[order[0]]
                cand = (int(xs[b]), int(ys[b]), e, i, float(dx[b]), float(dy[b]))
                if best is None or cand[:4] < best[:4]:
                    best = cand
    if best is None:
        return Verdict("holds")
    cx, cy, e, i, dx, dy = best
    return Verdict(
        "fails",
        {"x": g.orthant(cx), "y": g.orthant(cy), "e": e, "i": i, "gain_at_x": dx, "gain_at_y": dy},
    )


def _exh_definition(g: _Grid, tol: float) -> Verdict:
    N = g.N
    chunk = max(1, (1 << 21) // max(N, 1))
    dig = g.digits
    for start in range(0, N, chunk):
        stop = min(N, start + chunk)
        a = dig[start:stop, None, :]
        b = dig[None, :, :]
        same = a == b
        meet = np.where(same, a, 0)
        join = np.where(same | (b == 0), a, np.where(a == 0, b, 0))
        jc = join @ g.w
        mc = meet @ g.w
        lhs = g.vals[start:stop, None] + g.vals[None, :]
        rhs = g.vals[jc] + g.vals[mc]
        bad = np.argwhere(lhs < rhs - tol)
        if bad.size:
            r, c = bad[0]  # argwhere is row-major: smallest (x, y)
            x, y = g.orthant(start + r), g.orthant(c)
            return Verdict(
                "fails",
                {
                    "x": x,
                    "y": y,
                    "join": x.join(y),
                    "meet": x.meet(y),
                    "lhs": float(lhs[r, c]),
                    "rhs": float(rhs[r, c]),
                },
            )
    return Verdict("holds")


# -- sampled ------------------------------------------------------------------


def _verify_sampled(spec, props, samples, seed, tol) -> VerificationReport:
    rng = np.random.default_rng(seed)
    n, k = spec.n, spec.k
    f = spec.value

    def random_orthant():
        return tuple(int(v) for v in rng.integers(0, k + 1, size=n))

    def random_above(x):
        return tuple(a if a else (int(rng.integers(1, k + 1)) if rng.random() < 0.5 else 0) for a in x)

    def free_element(x):
        free = [e for e, a in enumerate(x) if not a]
        return int(rng.choice(free)) if free else None

    def put(x, e, i):
        t = list(x)
        t[e] = i
        return tuple(t)

    def orth(t):
        return Orthant(t, k)

    verdicts = {p: Verdict("not-checked") for p in PROPERTIES}

    if "orthant_submodular" in props:
        verdicts["orthant_submodular"] = Verdict("holds")
        for _ in range(samples):
            x = random_orthant()
            y = random_above(x)
            e = free_element(y)
            if e is None:
                continue
            i = int(rng.integers(1, k + 1))
            dx = f(put(x, e, i)) - f(x)
            dy = f(put(y, e, i)) - f(y)
            if dx < dy - tol:
                verdicts["orthant_submodular"] = Verdict(
                    "fails", {"x": orth(x), "y": orth(y), "e": e, "i": i, "gain_at_x": dx, "gain_at_y": dy}
                )
                break

    if "pairwise_monotone" in props:
        verdicts["pairwise_monotone"] = Verdict("holds")
        if k >= 2:
            for _ in range(samples):
                x = random_orthant()
                e = free_element(x)
                if e is None:
                    continue
                i, j = (int(v) + 1 for v in rng.choice(k, size=2, replace=False))
                i, j = min(i, j), max(i, j)
                base = f(x)
                di, dj = f(put(x, e, i)) - base, f(put(x, e, j)) - base
                if di + dj < -tol:
                    verdicts["pairwise_monotone"] = Verdict(
                        "fails",
                        {"x": orth(x), "e": e, "i": i, "j": j, "gain_i": di, "gain_j": dj, "lhs": di + dj, "rhs": 0.0},
                    )
                    break

    if "k_submodular" in props:
        verdicts["k_submodular"] = Verdict("holds")
        for _ in range(samples):
            x, y = orth(random_orthant()), orth(random_orthant())
            jn, mt = x.join(y), x.meet(y)
            lhs = f(x.assignment) + f(y.assignment)
            rhs = f(jn.assignment) + f(mt.assignment)
            if lhs < rhs - tol:
                verdicts["k_submodular"] = Verdict(
                    "fails", {"x": x, "y": y, "join": jn, "meet": mt, "lhs": lhs, "rhs": rhs}
                )
                break

    if "monotone" in props:
        verdicts["monotone"] = Verdict("holds")
        for _ in range(samples):
            x = random_orthant()
            e = free_element(x)
            if e is None:
                continue
            i = int(rng.integers(1, k + 1))
            lo, hi = f(x), f(put(x, e, i))
            if hi < lo - tol:
                verdicts["monotone"] = Verdict(
                    "fails", {"x": orth(x), "e": e, "i": i, "f(x)": lo, "f(x+I[e,i])": hi}
                )
                break

    return VerificationReport(verdicts, "sampled", samples=samples, seed=seed, k=k)
