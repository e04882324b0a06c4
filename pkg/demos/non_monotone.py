"""When adding a sensor can hurt.

Each placement carries a bonus: one sensor kind per site is penalised
(say, it interferes with neighbours), the others are rewarded. Pairs of
bonuses at a site never sum below zero, which keeps the objective
k-submodular, but the penalty makes it non-monotone. The solver then needs
deeper enumeration (w=7) and offers a weaker guarantee.
"""

import ksubmod
from ksubmod import SolverConfig, brute_force_opt, gen_signed_coverage, solve, verify

inst = gen_signed_coverage(8, 2, 16, seed=27)
rep = verify(inst.spec)
print(rep.format(inst.ids))

print("\nauto mode reads the monotonicity verdict and picks w:")
auto = solve(inst, SolverConfig(mode="auto"))
print(auto.format(inst.ids))

opt = brute_force_opt(inst)
print(f"\noptimum {opt.value:.4f}; greedy reached {auto.value / opt.value:.3f} of it")
print(f"guaranteed fraction: {ksubmod.NON_MONOTONE_RATIO:.3f}")

# shallower enumeration is cheaper but can fall short
for w in (0, 1, 2, 7):
    r = solve(inst, SolverConfig(w=w, mode="non-monotone"))
    print(f"w={w}: {r.value / opt.value:.3f} of optimal with {r.oracle_calls} oracle calls")
