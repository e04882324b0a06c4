"""JSON instance files.

Layout::

    {
      "k": 2,
      "budget": 4,
      "elements": [{"id": "e1", "cost": 1}, ...],
      "function": {"type": "coverage",
                   "universe": [{"id": "u1", "weight": 1.0}, ...],
                   "covers": {"e1": {"1": ["u1", "u2"], "2": ["u1"]}, ...}}
    }

``"type": "coverage_signed"`` adds ``"bonus": {"e1": [b_1, ..., b_k], ...}``.
``"type": "table"`` instead carries ``"values": {"1,0": 2.0, ...}``: one key per
orthant, the comma-joined coordinates in element order.
"""

from __future__ import annotations

import itertools
import json
from pathlib import Path

from .functions import CoverageSpec, SignedCoverageSpec, SpecError, TableSpec, encode, table_size
from .instance import Instance


class SchemaError(ValueError):
    pass


def _req(obj, key, where, kind=None):
    if not isinstance(obj, dict):
        raise SchemaError(f"{where}: expected an object")
    if key not in obj:
        raise SchemaError(f"{where}: missing field {key!r}")
    val = obj[key]
    if kind is not None and (not isinstance(val, kind) or isinstance(val, bool)):
        name = kind.__name__ if isinstance(kind, type) else "/".join(t.__name__ for t in kind)
        raise SchemaError(f"{where}.{key}: expected {name}, got {type(val).__name__}")
    return val


def parse_instance(doc) -> Instance:
    """Validate a decoded document (or JSON text) and build the instance."""
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    k = _req(doc, "k", "instance", int)
    if k < 1:
        raise SchemaError(f"instance.k: must be >= 1, got {k}")
    budget = _req(doc, "budget", "instance", int)
    if budget < 0:
        raise SchemaError(f"instance.budget: must be >= 0, got {budget}")
    elements = _req(doc, "elements", "instance", list)
    if not elements:
        raise SchemaError("instance.elements: at least one element is required")
    ids, costs = [], []
    for pos, el in enumerate(elements):
        where = f"elements[{pos}]"
        eid = _req(el, "id", where, str)
        c = _req(el, "cost", where, int)
        if c < 1:
            raise SchemaError(f"{where}.cost: element {eid!r} has cost {c}; costs must be >= 1")
        if eid in ids:
            raise SchemaError(f"{where}.id: duplicate element id {eid!r}")
        ids.append(eid)
        costs.append(c)
    fn = _req(doc, "function", "instance", dict)
    kind = _req(fn, "type", "function", str)
    n = len(ids)
    if kind in ("coverage", "coverage_signed"):
        spec = _parse_coverage(fn, ids, k)
        if kind == "coverage_signed":
            bonus = _req(fn, "bonus", "function", dict)
            rows = []
            for eid in ids:
                row = bonus.get(eid)
                if not isinstance(row, list) or len(row) != k:
                    raise SchemaError(f"function.bonus.{eid}: expected a list of {k} numbers")
                if not all(isinstance(b, (int, float)) and not isinstance(b, bool) for b in row):
                    raise SchemaError(f"function.bonus.{eid}: bonuses must be numbers")
                rows.append(tuple(float(b) for b in row))
            extra = set(bonus) - set(ids)
            if extra:
                raise SchemaError(f"function.bonus: unknown element ids {sorted(extra)}")
            try:
                spec = SignedCoverageSpec(spec, tuple(rows))
            except SpecError as exc:
                raise SchemaError(f"function.bonus: {exc}") from None
    elif kind == "table":
        values = _req(fn, "values", "function", dict)
        expected = table_size(n, k)
        if len(values) != expected:
            raise SchemaError(f"function.values: expected {expected} values, got {len(values)}")
        arr = [None] * expected
        for key, v in values.items():
            try:
                digits = tuple(int(t) for t in key.split(","))
            except ValueError:
                raise SchemaError(f"function.values: malformed key {key!r}") from None
            if len(digits) != n or any(not 0 <= d <= k for d in digits):
                raise SchemaError(f"function.values: key {key!r} is not {n} coordinates in [0, {k}]")
            if not isinstance(v, (int, float)) or isinstance(v, bool):
                raise SchemaError(f"function.values[{key!r}]: expected a number")
            arr[encode(digits, k)] = float(v)
        if any(v is None for v in arr):
            raise SchemaError("function.values: duplicate keys")
        try:
            spec = TableSpec(n, k, tuple(arr))
        except SpecError as exc:
            raise SchemaError(f"function.values: {exc}") from None
    else:
        raise SchemaError(f"function.type: unknown type {kind!r} (coverage, coverage_signed, table)")
    try:
        return Instance(spec, tuple(costs), budget, tuple(ids))
    except SpecError as exc:
        raise SchemaError(str(exc)) from None


def _parse_coverage(fn, ids, k) -> CoverageSpec:
    universe = _req(fn, "universe", "function", list)
    uids, weights = [], []
    for pos, item in enumerate(universe):
        where = f"function.universe[{pos}]"
        uid = _req(item, "id", where, str)
        w = _req(item, "weight", where, (int, float))
        if w < 0:
            raise SchemaError(f"{where}.weight: must be >= 0, got {w}")
        if uid in uids:
            raise SchemaError(f"{where}.id: duplicate universe id {uid!r}")
        uids.append(uid)
        weights.append(float(w))
    index = {u: b for b, u in enumerate(uids)}
    covers = _req(fn, "covers", "function", dict)
    extra = set(covers) - set(ids)
    if extra:
        raise SchemaError(f"function.covers: unknown element ids {sorted(extra)}")
    rows = []
    for eid in ids:
        per = covers.get(eid, {})
        if not isinstance(per, dict):
            raise SchemaError(f"function.covers.{eid}: expected an object keyed by coordinate")
        row = [0] * k
        for ckey, items in per.items():
            if ckey not in {str(i) for i in range(1, k + 1)}:
                raise SchemaError(f"function.covers.{eid}: coordinate key {ckey!r} outside 1..{k}")
            if not isinstance(items, list):
                raise SchemaError(f"function.covers.{eid}.{ckey}: expected a list of universe ids")
            mask = 0
            for u in items:
                if u not in index:
                    raise SchemaError(f"function.covers.{eid}.{ckey}: unknown universe id {u!r}")
                mask |= 1 << index[u]
            row[int(ckey) - 1] = mask
        rows.append(tuple(row))
    return CoverageSpec(tuple(weights), tuple(rows), tuple(uids))


def instance_to_dict(inst: Instance) -> dict:
    spec = inst.spec
    doc = {
        "k": inst.k,
        "budget": inst.budget,
        "elements": [{"id": eid, "cost": c} for eid, c in zip(inst.ids, inst.costs)],
    }
    if isinstance(spec, (CoverageSpec, SignedCoverageSpec)):
        cov = spec if isinstance(spec, CoverageSpec) else spec.coverage
        uids = cov.universe_ids or tuple(f"u{u + 1}" for u in range(len(cov.weights)))
        fn = {
            "type": spec.kind,
            "universe": [{"id": u, "weight": w} for u, w in zip(uids, cov.weights)],
            "covers": {
                eid: {str(i + 1): [uids[u] for u in range(len(uids)) if mask >> u & 1] for i, mask in enumerate(row)}
                for eid, row in zip(inst.ids, cov.covers)
            },
        }
        if isinstance(spec, SignedCoverageSpec):
            fn["bonus"] = {eid: list(row) for eid, row in zip(inst.ids, spec.bonus)}
    elif isinstance(spec, TableSpec):
        keys = itertools.product(range(spec.k + 1), repeat=spec.n)
        fn = {"type": "table", "values": {",".join(map(str, key)): v for key, v in zip(keys, spec.values)}}
    else:
        raise SchemaError(f"cannot serialize function of type {type(spec).__name__}")
    doc["function"] = fn
    return doc


def dumps(inst: Instance) -> str:
    return json.dumps(instance_to_dict(inst), indent=2) + "\n"


def load_instance(path) -> Instance:
    return parse_instance(Path(path).read_text())


def save_instance(inst: Instance, path):
    Path(path).write_text(dumps(inst))
