"""Batch comparison of greedy solutions against the brute-force optimum."""

from __future__ import annotations

import csv
import io
import itertools
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .exact import brute_force_opt
from .generators import gen_coverage, gen_signed_coverage
from .solver import SolverConfig, solve

COLUMNS = (
    "instance_id", "family", "n", "k", "L", "w", "mode",
    "greedy_value", "opt_value", "ratio", "oracle_calls", "wall_ms", "seed",
)
FAMILIES = ("coverage", "coverage-signed")


@dataclass
class ExperimentConfig:
    family: str = "coverage"
    n: list[int] = field(default_factory=lambda: [5])
    k: list[int] = field(default_factory=lambda: [2])
    universe_size: list[int] = field(default_factory=lambda: [10])
    cost_range: tuple[int, int] = (1, 5)
    budget_rule: object = "half"
    bonus_magnitude: float = 1.0
    instances: int = 10
    seed: int = 0
    solvers: list[dict] = field(default_factory=lambda: [{"w": 4, "mode": "monotone"}])
    out: str | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"family must be one of {FAMILIES}, got {self.family!r}")
        for name in ("n", "k", "universe_size"):
            vals = getattr(self, name)
            if isinstance(vals, int):
                vals = [vals]
                setattr(self, name, vals)
            if not vals or any(int(v) != v or v < 1 for v in vals):
                raise ValueError(f"{name} grid must hold positive integers, got {vals}")
        self.cost_range = tuple(self.cost_range)
        if self.instances < 1:
            raise ValueError("instances must be >= 1")
        if not self.solvers:
            raise ValueError("at least one solver configuration is required")
        self.solver_configs()  # validates

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        known = set(cls.__dataclass_fields__)
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown experiment config keys: {sorted(unknown)}")
        return cls(**d)

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def solver_configs(self) -> list[SolverConfig]:
        out = []
        for s in self.solvers:
            s = dict(s)
            s.pop("parallel", None)
            out.append(SolverConfig(**s))
        return out

    def jobs(self) -> list[dict]:
        """One job per generated instance, in grid order; seeds count up from ``seed``."""
        jobs = []
        idx = 0
        for n, k, u in itertools.product(self.n, self.k, self.universe_size):
            for _ in range(self.instances):
                jobs.append({
                    "instance_id": f"{self.family}-{idx:05d}",
                    "family": self.family, "n": n, "k": k, "universe_size": u,
                    "cost_range": self.cost_range, "budget_rule": self.budget_rule,
                    "bonus_magnitude": self.bonus_magnitude, "seed": self.seed + idx,
                })
                idx += 1
        return jobs


def build_instance(job: dict):
    common = dict(
        n=job["n"], k=job["k"], universe_size=job["universe_size"],
        cost_range=job["cost_range"], budget_rule=job["budget_rule"], seed=job["seed"],
    )
    if job["family"] == "coverage":
        return gen_coverage(**common)
    return gen_signed_coverage(bonus_magnitude=job["bonus_magnitude"], **common)


def ratio(greedy: float, opt: float) -> float:
    return 1.0 if opt == 0 else greedy / opt


def run_job(job: dict, configs: list[SolverConfig], timing: bool = True) -> list[dict]:
    inst = build_instance(job)
    opt = brute_force_opt(inst)
    rows = []
    for cfg in configs:
        t0 = time.perf_counter()
        rep = solve(inst, cfg)
        ms = (time.perf_counter() - t0) * 1000
        rows.append({
            "instance_id": job["instance_id"],
            "family": job["family"],
            "n": inst.n,
            "k": inst.k,
            "L": inst.budget,
            "w": rep.w,
            "mode": cfg.mode,
            "greedy_value": repr(rep.value),
            "opt_value": repr(opt.value),
            "ratio": f"{ratio(rep.value, opt.value):.12f}",
            "oracle_calls": rep.oracle_calls,
            "wall_ms": f"{ms:.3f}" if timing else "",
            "seed": job["seed"],
        })
    return rows


def run_experiment(config: ExperimentConfig, parallel: int = 1, timing: bool = True) -> list[dict]:
    """Rows in job order regardless of which worker finishes first."""
    configs = config.solver_configs()
    jobs = config.jobs()
    if parallel <= 1:
        per_job = [run_job(j, configs, timing) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=parallel) as pool:
            per_job = list(pool.map(run_job, jobs, [configs] * len(jobs), [timing] * len(jobs)))
    return [row for rows in per_job for row in rows]


def to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def write_csv(rows: list[dict], path):
    Path(path).write_text(to_csv(rows))
