"""
Three-valued logic and structures
=================================

"""

# Kleene values: 0, 1 and the unknown 1/2
from softinv.logic import LogicValue
F, H, T = LogicValue.FALSE, LogicValue.HALF, LogicValue.TRUE
print("1/2 & 1 =", H & T, "   1/2 | 1 =", H | T, "   !1/2 =", ~H)

# 1/2 is the top of the information order; 0 and 1 are incomparable
print("0 <= 1/2:", F.leq(H), "   0 <= 1:", F.leq(T), "   0 join 1 =", F.join(T))

# a structure: a universe of individuals and a table per predicate
from softinv.formula import parse_formula
from softinv.structure import PredicateDecl, Structure, Vocabulary
vocab = Vocabulary([
    PredicateDecl("x", 1, abstraction=True, unique=True),
    PredicateDecl("next", 2, functional=True),
    PredicateDecl("has[next]", 1, "instrumentation", parse_formula("exists u. next(v, u)"), ("v",)),
])
s = Structure.empty(vocab, ["n0", "n1", "n2"]).edit()
s.set("x", "n0", 1).set("next", ("n0", "n1"), 1).set("next", ("n1", "n2"), 1)

# instrumentation predicates are computed from their definitions
from softinv.evaluation import eval, recompute_instrumentation
s = recompute_instrumentation(s.freeze())
print(s.describe())

# formulas evaluate to a Kleene value under an assignment of free variables
print("exists v. x(v) ->", eval(s, parse_formula("exists v. x(v)")))
print("has[next](n2)  ->", eval(s, parse_formula("has[next](v)"), {"v": "n2"}))
