"""Checking the assumptions, then the analysis, on small instances.

The verifier tests diminishing returns and the join/meet inequality over
every orthant. The proof checker rebuilds the greedy run from the first
``w`` steps of a reordered optimum and evaluates each inequality of the
approximation analysis, reporting the slack of each.
"""

from ksubmod import gen_coverage, gen_table, mutate_table, verify
from ksubmod.proofcheck import gen_rejection_instance, ratio_lower_bound, run_proofcheck

inst = gen_coverage(3, 2, 6, seed=11)
print("a coverage function:")
print(verify(inst.spec).format(inst.ids))

# one corrupted table entry is enough for the verifier to produce a witness
table = gen_table(inst)
full = (1,) * inst.n
bad = mutate_table(table, full, table.spec.value(full) + 5.0)
print("\nthe same function with f(all in coordinate 1) raised by 5:")
print(verify(bad.spec).format(bad.ids))

# an instance where greedy is forced to skip an optimal element
for w in (1, 2, 3):
    crafted = gen_rejection_instance(w, k=2, seed=w)
    print(f"\nproof check with w={w}:")
    print(run_proofcheck(crafted, w).format(crafted.ids))

rb = ratio_lower_bound([3.0, 1.0, 0.5, 0.5, 0.2], 4)
print(f"\nratio lemma on a sample: {rb.lhs:.4f} >= {rb.bound1:.4f} >= {rb.bound2:.4f}")
