"""Shared fixtures.

F1: two sites e1, e2, two sensor types, three unit-weight targets::

    T(e1,1) = {u1,u2}   T(e1,2) = {u1}
    T(e2,1) = {u3}      T(e2,2) = {u2,u3}

costs c(e1) = 1, c(e2) = 2.  F2 adds the bonuses b(e1) = (-1.5, +1.5),
b(e2) = (0, 0), which keeps k-submodularity and breaks monotonicity.
"""

import pytest

from ksubmod import CoverageSpec, Instance, SignedCoverageSpec

U1, U2, U3 = 1, 2, 4
F1_SETS = {(0, 1): {"u1", "u2"}, (0, 2): {"u1"}, (1, 1): {"u3"}, (1, 2): {"u2", "u3"}}


def f1_spec():
    return CoverageSpec((1.0, 1.0, 1.0), ((U1 | U2, U1), (U3, U2 | U3)), ("u1", "u2", "u3"))


def f2_spec():
    return SignedCoverageSpec(f1_spec(), ((-1.5, 1.5), (0.0, 0.0)))


def f1_instance(budget=2):
    return Instance(f1_spec(), (1, 2), budget, ("e1", "e2"))


def f2_instance(budget=2):
    return Instance(f2_spec(), (1, 2), budget, ("e1", "e2"))


def hand_value(assignment, bonus=None):
    """Independent evaluator: explicit set union plus optional bonuses."""
    covered = set()
    total = 0.0
    for e, i in enumerate(assignment):
        if i:
            covered |= F1_SETS[(e, i)]
            if bonus:
                total += bonus[e][i - 1]
    return len(covered) + total


@pytest.fixture
def f1():
    return f1_instance()


@pytest.fixture
def f2():
    return f2_instance()
