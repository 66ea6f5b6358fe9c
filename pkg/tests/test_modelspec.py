import pytest

from softinv.evaluation import eval
from softinv.formula import parse_formula
from softinv.logic import LogicValue
from softinv.modelspec import (ModelError, ModelSyntaxError, SoftInvariantDecl, builtin_model,
                               builtin_models, expand_soft_invariants, load_model, parse_model,
                               resolve_model, serialize_model, soft_invariant_name)
from softinv.transformer import coerce

T = LogicValue.TRUE

MINIMAL = """\
%name tiny
%predicates
core is[thread] unary abs
core p binary functional
instr has[p](v) := exists u. p(v, u)
%locations
l0 l1
%actions
action go : l0 -> l1
%init
T* : is[thread] at[l0]
%property
forall v. !has[p](v)
"""


def test_inc_si_vocabulary_counts():
    m = builtin_model("inc_si")
    core_unary = [d for d in m.vocab.of_arity(1) if not d.instrumentation]
    binary = [d for d in m.vocab.of_arity(2) if d.name != "eq"]
    fields = [d for d in m.vocab.instrumentation if d.name.startswith("has[")]
    assert len(core_unary) == 8
    assert len(binary) == 3
    assert len(fields) == 3
    assert len(m.soft_invariants) == 2


def test_soft_invariant_naming():
    assert soft_invariant_name("line4", parse_formula("has[a](v)")) == "pif[line4,has[a]]"
    assert soft_invariant_name("line3", parse_formula("!has[a](v)")) == "pnif[line3,has[a]]"
    with pytest.raises(ModelError):
        soft_invariant_name("l", parse_formula("p(v) & q(v)"))


def test_soft_invariant_definition():
    si = SoftInvariantDecl("line4", parse_formula("has[a](v)"), "pif[line4,has[a]]")
    assert str(si.decl.definition) == str(parse_formula("is[thread](v) & (at[line4](v) -> has[a](v))"))


def test_minimal_model_parses():
    m = parse_model(MINIMAL)
    assert m.name == "tiny" and m.locations == ("l0", "l1")
    s = m.initial[0]
    assert eval(s, m.property) is T
    assert m.abstraction_set == ("is[thread]",)
    loc_abs = parse_model(MINIMAL.replace("%locations", "%locations abs"))
    assert set(loc_abs.abstraction_set) == {"is[thread]", "at[l0]", "at[l1]"}


@pytest.mark.parametrize("text,line,fragment", [
    (MINIMAL.replace("forall v. !has[p](v)", "forall v. q(v)"), 13, "undeclared predicate q"),
    (MINIMAL.replace("instr has[p](v) := exists u. p(v, u)", "instr has[p](v) := has[p](v)"), 5, "cyclic"),
    (MINIMAL.replace("action go : l0 -> l1", "action go : l0 -> l1\n    focus has[p](t) & has[p](t)"), 10,
     "unsupported focus"),
    (MINIMAL.replace("l0 -> l1", "l0 -> l9"), 9,
     "unknown location"),
    (MINIMAL.replace("%locations", "%location"), 6, "unknown section"),
    (MINIMAL.replace("core p binary functional", "core p binary sticky"), 4, "unknown flags"),
])
def test_diagnostics_carry_line_numbers(text, line, fragment):
    with pytest.raises(ModelSyntaxError) as e:
        parse_model(text)
    assert e.value.line == line
    assert fragment in str(e.value)


def test_missing_property_is_an_error():
    with pytest.raises(ModelSyntaxError):
        parse_model(MINIMAL.split("%property")[0])


@pytest.mark.parametrize("name", builtin_models())
def test_serialize_round_trip(name):
    m = builtin_model(name)
    again = parse_model(serialize_model(m))
    assert again.name == m.name
    assert again.vocab == m.vocab
    assert again.actions == m.actions
    assert again.soft_invariants == m.soft_invariants
    assert again.initial[0].same_as(m.initial[0])


def test_load_and_resolve(tmp_path):
    path = tmp_path / "tiny.tvm"
    path.write_text(MINIMAL)
    assert load_model(path).name == "tiny"
    assert resolve_model(str(path)).name == "tiny"
    assert resolve_model("inc_si").name == "inc_si"
    with pytest.raises(ModelError):
        resolve_model("no_such_model")


def test_expand_soft_invariants_drops_them_from_the_list():
    m = builtin_model("inc_si")
    e = expand_soft_invariants(m)
    assert e.soft_invariants == () and e.vocab == m.vocab


def test_without_soft_invariants():
    m = builtin_model("inc_si")
    bare = m.without_soft_invariants()
    assert bare.soft_invariants == () and bare.name == "inc_si_no_si"
    assert not any(d.name.startswith("pif[") for d in bare.vocab)
    assert builtin_model("stack_no_si").soft_invariants == ()


def test_initial_structures_are_coerced():
    for name in builtin_models():
        m = builtin_model(name)
        s = m.initial[0]
        assert coerce(s, m.constraints).same_as(s)


def test_location_exclusivity_constraints():
    m = builtin_model("inc_si")
    origins = {c.origin for c in m.constraints}
    assert "location" in origins
