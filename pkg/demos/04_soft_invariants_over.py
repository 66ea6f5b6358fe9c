"""
Extra soft invariants, including a false one
============================================

"""

# extra soft invariants never make the analysis unsound; a false one only stays at 1/2
from softinv import builtin_model, explore
m = builtin_model("inc_si_over")
for si in m.soft_invariants:
    print(f"{si.name:24s} at {si.location}: {si.body}")

sp = explore(m)
print("states:", sp.stats.ca_states, " verified:", sp.verified)

(s,) = sp.structures()
threads = [u for u in s.universe if s.get("is[thread]", u).value]
for si in m.soft_invariants:
    print(f"{si.name:24s}", [str(s.get(si.name, t)) for t in threads])
