import pytest

from softinv.abstraction import canonical_abstract, embeds
from softinv.evaluation import eval, recompute_instrumentation
from softinv.formula import parse_formula
from softinv.logic import LogicValue
from softinv.modelspec import builtin_model
from softinv.structure import ContractError, PredicateDecl, Structure, Vocabulary
from softinv.transformer import (ModelError, coerce, compile_constraints, duplicate, focus,
                                 focus_edge, focus_shape, focus_unary, materialize, apply_action)

F, H, T = LogicValue.FALSE, LogicValue.HALF, LogicValue.TRUE

V = Vocabulary([
    PredicateDecl("x", 1, abstraction=True, unique=True),
    PredicateDecl("n", 2, functional=True),
    PredicateDecl("has[n]", 1, "instrumentation", parse_formula("exists u. n(v, u)"), ("v",)),
])
C = compile_constraints(V)


def test_coerce_sharpens_unique_predicate():
    s = Structure.empty(V, ["a", "b"]).edit().set("x", "a", 1).set("x", "b", 0.5).freeze()
    c = coerce(s, C)
    assert c.get("x", "b") is F


def test_coerce_sharpens_from_instrumentation():
    s = Structure.empty(V, ["a", "b"]).edit().set("has[n]", "a", 1).set("n", ("a", "b"), 0.5).freeze()
    assert coerce(s, C).get("n", "a", "b") is T


def test_coerce_sharpens_functional_edges():
    s = (Structure.empty(V, ["a", "b", "c"]).edit().set("n", ("a", "b"), 1)
         .set("n", ("a", "c"), 0.5).set("has[n]", "a", 1).freeze())
    assert coerce(s, C).get("n", "a", "c") is F


def test_coerce_detects_inconsistency():
    s = Structure.empty(V, ["a", "b"]).edit().set("x", "a", 1).set("x", "b", 1).freeze()
    assert coerce(s, C) is None
    s = Structure.empty(V, ["a"]).edit().set("has[n]", "a", 1).freeze()
    assert coerce(s, C) is None


def test_coerce_on_summary_keeps_half():
    s = Structure.empty(V, ["a"], summary=["a"]).edit().set("x", "a", 0.5).freeze()
    c = coerce(s, C)
    assert c.get("x", "a") is H


def test_materialize_cases():
    s = Structure.empty(V, ["a"], summary=["a"])
    cases = materialize(s, "a")
    assert len(cases) == 2
    exact, _ = cases[0]
    split, t = cases[1]
    assert not exact.is_summary("a")
    assert split.is_summary("a") and not split.is_summary(t)
    assert materialize(exact, "a") == [(exact, "a")]


def test_duplicate_copies_tuples():
    s = Structure.empty(V, ["a", "b"]).edit().set("n", ("a", "b"), 1).freeze()
    d, name = duplicate(s, "b")
    assert d.get("n", "a", name) is T and d.get("eq", "b", name) is F


def test_focus_unary_on_summary_has_three_cases():
    s = Structure.empty(V, ["a"], summary=["a"]).edit().set("x", "a", 0.5).freeze()
    cases = focus_unary(s, "x", "a")
    assert len(cases) == 3
    assert [c.get("x", u) for c, u in cases] == [T, F, T]
    assert len(focus_unary(cases[0][0], "x", "a")) == 1


def test_focus_edge_splits_summary_targets():
    s = (Structure.empty(V, ["t", "s"], summary=["s"]).edit()
         .set("n", ("t", "s"), 0.5).freeze())
    out = focus_edge(s, "n", "t")
    assert len(out) == 3
    for r in out:
        assert all(v != H for v in r.values["n"][r.index("t")])
    # each case still embeds the concrete structures it covers
    conc = Structure.empty(V, ["t", "s1", "s2"]).edit().set("n", ("t", "s2"), 1).freeze()
    covered = [r for r in out if len(r.universe) == 3]
    assert any(embeds(conc, r, dict(zip(conc.universe, perm)))
               for r in covered for perm in [r.universe, (r.universe[0], r.universe[2], r.universe[1])])


def test_focus_needs_thread_binding():
    s = Structure.empty(V, ["a"])
    with pytest.raises(ContractError):
        focus(s, parse_formula("x(t)"), {})


@pytest.mark.parametrize("text,kind", [
    ("x(t)", "unary"), ("!x(t)", "unary"), ("exists u. n(t, u)", "edge"),
    ("exists u, w. a(t, u) & n(u, w)", "chain"), ("exists u, w. x(u) & n(u, w)", "global-chain"),
])
def test_focus_shapes(text, kind):
    assert focus_shape(parse_formula(text))[0] == kind


@pytest.mark.parametrize("text", ["x(v)", "exists u. x(u)", "x(t) & x(t)", "forall u. n(t, u)"])
def test_unsupported_focus_shapes(text):
    with pytest.raises(ModelError):
        focus_shape(parse_formula(text))


def test_apply_action_is_sound_for_cas():
    m = builtin_model("inc_si")
    act = m.action("cas_ok")
    # thread at line5 holding a = x and b = its successor
    conc = Structure.empty(m.vocab, ["t", "n0", "n1"]).edit()
    conc.set("is[thread]", "t", 1).set("at[line5]", "t", 1)
    conc.set("is[node]", "n0", 1).set("is[node]", "n1", 1).set("x", "n0", 1)
    conc.set("next", ("n0", "n1"), 1).set("next", ("n1", "n0"), 1)
    conc.set("a", ("t", "n0"), 1).set("b", ("t", "n1"), 1)
    conc = recompute_instrumentation(conc.freeze())
    A = m.abstraction_set
    succ = apply_action(conc, act, "t", m.constraints, A)
    assert len(succ) == 1
    post = succ[0]
    assert eval(post, parse_formula("exists v. x(v)")) is T
    assert eval(post, parse_formula("exists v. at[line6](v)")) is T
    # the abstract transformer covers the concrete successor
    ca = canonical_abstract(conc, A)
    t = [u for u in ca.universe if ca.get("is[thread]", u) is T][0]
    abstract = apply_action(ca, act, t, m.constraints, A)
    assert any(set(r.universe) == set(post.universe)
               and embeds(post, r, {u: u for u in post.universe}) for r in abstract)


def test_apply_action_respects_guard():
    m = builtin_model("inc_si")
    s = m.initial[0]
    threads = [u for u in s.universe if s.values["is[thread]"][s.index(u)] != 0]
    assert threads
    # no thread is at line5 initially, so cas cannot fire
    assert all(apply_action(s, m.action("cas_ok"), t, m.constraints, m.abstraction_set) == []
               for t in threads)
    assert any(apply_action(s, m.action("begin"), t, m.constraints, m.abstraction_set)
               for t in threads)
