"""
Canonical abstraction and embedding
===================================

"""

# a five-node list; only the head is pointed to by x
from softinv.formula import parse_formula
from softinv.structure import PredicateDecl, Structure, Vocabulary
vocab = Vocabulary([
    PredicateDecl("x", 1, abstraction=True),
    PredicateDecl("next", 2, functional=True),
])
names = [f"n{i}" for i in range(5)]
b = Structure.empty(vocab, names).edit().set("x", "n0", 1)
for u, w in zip(names, names[1:]):
    b.set("next", (u, w), 1)
s = b.freeze()

# merge individuals that agree on the abstraction predicates
from softinv.abstraction import abstraction_map, canonical_abstract, embeds
A = vocab.abstraction_set
c = canonical_abstract(s, A)
print(c.describe())          # the tail collapses into one summary individual, marked *

# every concrete fact survives as itself or as 1/2
f = abstraction_map(s, A)
print("embeds:", embeds(s, c, f))

# so a formula never gets a definite value that contradicts the concrete one;
# x stays exact, while whether a node has a successor becomes unknown
from softinv.evaluation import eval
for text in ("x(v)", "exists u. next(v, u)"):
    phi = parse_formula(text)
    print(text)
    for u in names:
        print("  ", u, eval(s, phi, {"v": u}), "->", eval(c, phi, {"v": f[u]}))
