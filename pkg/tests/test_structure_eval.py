import numpy as np
import pytest

from softinv.evaluation import (eval, eval_array, footprint_array, recompute_instrumentation,
                                refresh_instrumentation)
from softinv.formula import parse_formula
from softinv.logic import LogicValue
from softinv.structure import ContractError, PredicateDecl, Structure, Vocabulary

F, H, T = LogicValue.FALSE, LogicValue.HALF, LogicValue.TRUE


def vocab():
    return Vocabulary([
        PredicateDecl("is[thread]", 1, abstraction=True),
        PredicateDecl("x", 1, abstraction=True, unique=True),
        PredicateDecl("next", 2, functional=True),
        PredicateDecl("a", 2, functional=True),
        PredicateDecl("b", 2, functional=True),
        PredicateDecl("has[a]", 1, "instrumentation", parse_formula("exists u. a(v, u)"), ("v",)),
        PredicateDecl("succ", 1, "instrumentation",
                      parse_formula("exists u, w. a(v, u) & b(v, w) & next(u, w)"), ("v",)),
    ])


def concrete_thread():
    s = Structure.empty(vocab(), ["t", "n1", "n2"])
    b = s.edit()
    b.set("is[thread]", "t", 1).set("x", "n1", 1)
    b.set("next", ("n1", "n2"), 1).set("next", ("n2", "n1"), 1)
    b.set("a", ("t", "n1"), 1).set("b", ("t", "n2"), 1)
    return recompute_instrumentation(b.freeze())


def test_vocabulary_validation():
    with pytest.raises(ContractError):
        Vocabulary([PredicateDecl("p", 1), PredicateDecl("p", 1)])
    with pytest.raises(ContractError):
        Vocabulary([PredicateDecl("h", 1, "instrumentation", parse_formula("q(v)"), ("v",))])
    with pytest.raises(ContractError):
        PredicateDecl("p", 2, abstraction=True)
    with pytest.raises(ContractError):
        PredicateDecl("p", 1, "instrumentation", parse_formula("q(v, w)"), ("v",))
    assert vocab().abstraction_set == ("is[thread]", "x")
    assert vocab().names[0] == "eq"


def test_structure_validates_eq_and_shapes():
    v = vocab()
    s = Structure.empty(v, ["u", "w"], summary=["w"])
    assert s.is_summary("w") and not s.is_summary("u")
    bad = dict(s.values)
    bad["eq"] = np.full((2, 2), 2, dtype=np.int8)
    with pytest.raises(ContractError):
        Structure(v, s.universe, bad)
    bad = dict(s.values)
    bad["x"] = np.zeros(3, dtype=np.int8)
    with pytest.raises(ContractError):
        Structure(v, s.universe, bad)
    with pytest.raises(ContractError):
        Structure.empty(v, ["u", "u"])


def test_structures_are_immutable():
    s = concrete_thread()
    with pytest.raises(ValueError):
        s.values["x"][0] = 2
    s2 = s.edit().set("x", "n2", 1).freeze()
    assert s.get("x", "n2") is F and s2.get("x", "n2") is T


def test_eval_on_concrete_structure():
    s = concrete_thread()
    assert eval(s, parse_formula("exists v. x(v)")) is T
    assert eval(s, parse_formula("succ(t)"), {"t": "t"}) is T
    assert eval(s, parse_formula("forall v. x(v)")) is F
    assert s.is_concrete()


def test_eval_requires_bound_variables():
    with pytest.raises(ContractError):
        eval(concrete_thread(), parse_formula("x(v)"))


def test_eq_on_summary_is_half():
    s = Structure.empty(vocab(), ["u", "w"], summary=["w"])
    f = parse_formula("v == v")
    assert eval(s, f, {"v": "w"}) is H
    assert eval(s, f, {"v": "u"}) is T


def test_quantifier_over_summary_edge():
    s = Structure.empty(vocab(), ["n1", "ns"], summary=["ns"]).edit().set("next", ("n1", "ns"), 0.5).freeze()
    assert eval(s, parse_formula("exists u. next(v, u)"), {"v": "n1"}) is H
    assert eval(s, parse_formula("exists u. next(v, u)"), {"v": "ns"}) is F


def test_empty_universe_quantifiers():
    s = Structure.empty(vocab(), [])
    assert eval(s, parse_formula("exists v. x(v)")) is F
    assert eval(s, parse_formula("forall v. x(v)")) is T


def test_eval_array_axes():
    s = concrete_thread()
    arr = eval_array(s, parse_formula("next(v, w)"), ("w", "v"))
    assert arr[s.index("n2"), s.index("n1")] == T.value
    assert arr.shape == (3, 3)


def test_recompute_matches_definition():
    s = concrete_thread()
    assert s.get("has[a]", "t") is T and s.get("has[a]", "n1") is F
    assert s.get("succ", "t") is T


def test_recompute_can_lose_precision_on_abstract_structures():
    s = Structure.empty(vocab(), ["t", "ns"], summary=["ns"])
    s = s.edit().set("a", ("t", "ns"), 0.5).set("has[a]", "t", 1).freeze()
    assert recompute_instrumentation(s).get("has[a]", "t") is H


def test_refresh_keeps_bystanders():
    s = Structure.empty(vocab(), ["t", "u", "ns"], summary=["ns"])
    s = s.edit().set("a", ("u", "ns"), 0.5).set("has[a]", "u", 1).freeze()
    written = {"a": np.zeros((3, 3), dtype=bool)}
    written["a"][0, :] = True  # only t's row was written
    r = refresh_instrumentation(s, written)
    assert r.get("has[a]", "u") is T
    assert r.get("has[a]", "t") is F


def test_footprint_is_shielded_by_fixed_parts():
    s = concrete_thread()
    f = parse_formula("exists u. a(v, u) & x(u)")
    written = {"x": np.zeros(3, dtype=bool)}
    written["x"][s.index("n2")] = True
    fp = footprint_array(s, f, ("v",), written)
    # a(t, n2) = 0 and unwritten, so t's value cannot change
    assert not fp[s.index("t")]
    written["x"][s.index("n1")] = True
    assert footprint_array(s, f, ("v",), written)[s.index("t")]


def test_describe_and_sub():
    s = concrete_thread()
    text = s.describe()
    assert "t: is[thread] has[a] succ" in text and "next(n1,n2)" in text
    sub = s.sub(["n2", "n1"])
    assert sub.universe == ("n2", "n1") and sub.get("next", "n1", "n2") is T
