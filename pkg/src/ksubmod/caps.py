"""Enumeration limits shared by the exhaustive routines.

``KSUBMOD_ENUM_SCALE`` (a positive float, default 1) multiplies every default
cap, so large desk experiments can lift all limits at once.
"""

import os

VERIFY_ORTHANT_CAP = 2**20     # (k+1)^n for exhaustive verification
VERIFY_PAIR_CAP = 2**26        # orthant pairs for the join/meet inequality
BRUTE_FORCE_CAP = 2**22        # (k+1)^n for the exact solver
SEED_CAP = 5_000_000           # directly scored candidates plus size-w seeds in the greedy solver


class CapExceeded(RuntimeError):
    pass


def scaled(cap: int) -> int:
    scale = float(os.environ.get("KSUBMOD_ENUM_SCALE", "1"))
    if scale <= 0:
        raise ValueError("KSUBMOD_ENUM_SCALE must be positive")
    return int(cap * scale)
