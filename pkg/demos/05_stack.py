"""
A nonblocking stack with collapsed threads
==========================================

"""

# pushers allocate and link a node, then swing top with a compare-and-swap;
# poppers read top and its successor, then swing top back
from softinv import builtin_model, explore
m = builtin_model("stack_si")
print(m.property)
for si in m.soft_invariants:
    print(f"  {si.name:20s} at {si.location}: {si.body}")

# with soft invariants the statespace is small and the property holds
sp = explore(m)
print("stack_si   states:", sp.stats.ca_states, " verified:", sp.verified)

# the same model without them reports a potential violation
bare = explore(builtin_model("stack_no_si"))
print("stack_no_si states:", bare.stats.ca_states, " violations:", len(bare.violations))
print("trace:", " -> ".join(a for a, _ in bare.trace(0)))

# check the abstraction against a bounded concrete run
from softinv.oracle import BoundSpec, check_soundness, explore_concrete
cs = explore_concrete(m, BoundSpec(2, 2))
rep = check_soundness(sp, cs.states)
print(f"2 threads, 2 nodes: {rep.covered}/{rep.checked} concrete states covered")
