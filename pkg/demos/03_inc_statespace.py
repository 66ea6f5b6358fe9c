"""
Merging threads in the increment example
========================================

"""

# three variants of the lock-free cursor increment
from softinv import builtin_model, explore
full = explore(builtin_model("inc_full_A"))      # every thread type is an abstraction predicate
si = explore(builtin_model("inc_si"))            # threads collapsed, with soft invariants
bare = explore(builtin_model("inc_collapsed_no_si"))  # threads collapsed, no soft invariants

for sp in (si, bare, full):
    print(f"{sp.model.name:22s} states={sp.stats.ca_states:4d}  verified={sp.verified}  "
          f"{sp.stats.elapsed:.1f}s")

# without soft invariants the collapsed model loses the link between a, b and x
v = bare.violations[0]
print("spurious trace:", " -> ".join(a for a, _ in bare.trace(v)))

# the single stored state of inc_si
print(si.structures()[0].describe())

# the bounded concrete oracle: eight distinct kinds of thread, whatever the bound
from softinv.oracle import BoundSpec, census, explore_concrete, format_census
cs = explore_concrete(builtin_model("inc_si"), BoundSpec(2, 2))
print(format_census(census(cs.states)))
