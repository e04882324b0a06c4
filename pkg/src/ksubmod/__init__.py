"""Greedy maximization of k-submodular functions under a knapsack constraint.

Approximation guarantees of the partial-enumeration greedy::

    monotone objectives, w = 4:      (1 - e^-2) / 2 ≈ 0.432
    non-monotone objectives, w = 7:  (1 - e^-3) / 3 ≈ 0.317
"""

import math

from .exact import OptResult, brute_force_opt
from .functions import (
    CoverageSpec,
    Oracle,
    SignedCoverageSpec,
    TableSpec,
    evaluate,
    marginal_gain,
    tabulate,
)
from .generators import gen_coverage, gen_signed_coverage, gen_table, mutate_table
from .instance import Instance
from .instance_io import dumps, load_instance, parse_instance, save_instance
from .orthant import Orthant, join, make_singleton, meet, override_with, precedes
from .proofcheck import ProofcheckReport, RatioBound, ratio_lower_bound, run_proofcheck
from .solver import SolverConfig, SolveReport, best_density_pair, enumerate_seeds, greedy_extend, solve
from .verify import VerificationReport, verify

MONOTONE_RATIO = 0.5 * (1 - math.exp(-2))
NON_MONOTONE_RATIO = (1 - math.exp(-3)) / 3

__all__ = [
    "CoverageSpec", "Instance", "MONOTONE_RATIO", "NON_MONOTONE_RATIO", "OptResult", "Oracle",
    "Orthant", "ProofcheckReport", "RatioBound", "SignedCoverageSpec", "SolveReport", "SolverConfig", "TableSpec", "VerificationReport",
    "best_density_pair", "brute_force_opt", "dumps", "enumerate_seeds", "evaluate", "gen_coverage",
    "gen_signed_coverage", "gen_table", "greedy_extend", "join", "load_instance", "make_singleton",
    "marginal_gain", "meet", "mutate_table", "override_with", "parse_instance", "precedes", "ratio_lower_bound", "run_proofcheck",
    "save_instance", "solve", "tabulate", "verify",
]
