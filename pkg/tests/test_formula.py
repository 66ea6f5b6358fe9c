import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from softinv.formula import (FALSE, TRUE, And, Atom, Const, Exists, Forall, FormulaSyntaxError,
                             Iff, Implies, Not, Or, atom, conj, disj, eq, parse_formula, render,
                             substitute)
from softinv.logic import LogicValue


def test_atoms_and_equality():
    assert parse_formula("x(v)") == Atom("x", ("v",))
    assert parse_formula("v == w") == eq("v", "w")
    assert parse_formula("v != w") == Not(eq("v", "w"))
    assert parse_formula("flag()") == Atom("flag", ())


def test_bracketed_names():
    f = parse_formula("pif[line4,has[a]](v) & has[a](v)")
    assert f == And((Atom("pif[line4,has[a]]", ("v",)), Atom("has[a]", ("v",))))


def test_precedence():
    f = parse_formula("a(v) | b(v) & c(v) -> d(v) <-> e(v)")
    assert isinstance(f, Iff)
    assert isinstance(f.left, Implies)
    assert isinstance(f.left.left, Or)
    assert isinstance(f.left.left.parts[1], And)


def test_implication_is_right_associative():
    f = parse_formula("a() -> b() -> c()")
    assert f == Implies(atom("a"), Implies(atom("b"), atom("c")))


def test_quantifier_scope_extends_right():
    f = parse_formula("exists u, w. a(v, u) & next(u, w)")
    assert isinstance(f, Exists) and f.vars == ("u", "w")
    assert isinstance(f.body, And)
    assert f.free_vars() == {"v"}


def test_constants():
    assert parse_formula("1/2") == Const(LogicValue.HALF)
    assert parse_formula("0") == FALSE
    assert parse_formula("1") == TRUE


def test_free_vars_and_atoms():
    f = parse_formula("forall v. top(v) -> inited(v) | q(w)")
    assert f.free_vars() == {"w"}
    assert {a.pred for a in f.atoms()} == {"top", "inited", "q"}


def test_substitute_respects_binding():
    f = parse_formula("p(v) & exists v. q(v, w)")
    g = substitute(f, {"v": "t", "w": "u"})
    assert g == parse_formula("p(t) & exists v. q(v, u)")


def test_helpers():
    assert conj() == TRUE and disj() == FALSE
    assert conj(atom("p", "v")) == atom("p", "v")
    assert (atom("p", "v") & atom("q", "v")) == And((atom("p", "v"), atom("q", "v")))
    assert ~atom("p", "v") == Not(atom("p", "v"))


@pytest.mark.parametrize("text", [
    "p(v", "p(v))", "exists . p(v)", "p(v) &", "v ==", "& p(v)", "p(v) q(v)", "p[x(v)",
])
def test_syntax_errors(text):
    with pytest.raises(FormulaSyntaxError) as e:
        parse_formula(text)
    assert 0 <= e.value.pos <= len(text)


def test_error_position_points_at_problem():
    with pytest.raises(FormulaSyntaxError) as e:
        parse_formula("p(v) & & q(v)")
    assert e.value.pos == 7


def test_render_examples():
    assert render(parse_formula("!(a(v) | b(v))")) == "!(a(v) | b(v))"
    assert render(parse_formula("forall u. top(u) <-> tp(t, u)")) == "forall u. top(u) <-> tp(t, u)"


NAMES = st.sampled_from(["p", "q", "has[a]", "pif[l,has[b]]"])
VARS = st.sampled_from(["v", "w", "u"])


def formulas():
    leaf = st.one_of(
        st.builds(lambda p, a: Atom(p, (a,)), NAMES, VARS),
        st.builds(lambda p, a, b: Atom(p, (a, b)), NAMES, VARS, VARS),
        st.builds(lambda a, b: eq(a, b), VARS, VARS),
        st.sampled_from([Const(v) for v in LogicValue]),
    )

    def extend(children):
        return st.one_of(
            st.builds(Not, children),
            st.builds(lambda xs: And(tuple(xs)), st.lists(children, min_size=2, max_size=3)),
            st.builds(lambda xs: Or(tuple(xs)), st.lists(children, min_size=2, max_size=3)),
            st.builds(Implies, children, children),
            st.builds(Iff, children, children),
            st.builds(lambda v, b: Exists((v,), b), VARS, children),
            st.builds(lambda v, b: Forall((v,), b), VARS, children),
        )

    return st.recursive(leaf, extend, max_leaves=8)


def _flatten(f):
    """Normalize nested same-kind And/Or, which the parser flattens."""
    if isinstance(f, (And, Or)):
        parts = []
        for p in f.parts:
            p = _flatten(p)
            parts.extend(p.parts if type(p) is type(f) else [p])
        return type(f)(tuple(parts))
    if isinstance(f, Not):
        return Not(_flatten(f.body))
    if isinstance(f, (Implies, Iff)):
        return type(f)(_flatten(f.left), _flatten(f.right))
    if isinstance(f, (Exists, Forall)):
        return type(f)(f.vars, _flatten(f.body))
    return f


@settings(max_examples=300, deadline=None)
@given(formulas())
def test_render_parse_round_trip(f):
    g = parse_formula(render(f))
    assert _flatten(g) == _flatten(f)
    assert render(g) == render(parse_formula(render(g)))
