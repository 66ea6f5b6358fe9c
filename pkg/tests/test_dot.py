from softinv.dot import export_dot
from softinv.modelspec import builtin_model
from softinv.structure import PredicateDecl, Structure, Vocabulary

V = Vocabulary([
    PredicateDecl("is[thread]", 1, abstraction=True),
    PredicateDecl("is[node]", 1, abstraction=True),
    PredicateDecl("a", 2),
    PredicateDecl("flag", 0),
])


def sample():
    s = Structure.empty(V, ["t", "n"], summary=["n"]).edit()
    s.set("is[thread]", "t", 1).set("is[node]", "n", 1).set("a", ("t", "n"), 0.5)
    return s.set("flag", (), 1).freeze()


def test_shapes_and_summary_border():
    text = export_dot(sample(), "demo")
    assert text.startswith('digraph "demo" {') and text.rstrip().endswith("}")
    assert '"t" [shape=hexagon' in text
    assert '"n" [shape=box' in text and "peripheries=2" in text
    assert text.count("peripheries=2") == 1


def test_edges_and_labels():
    text = export_dot(sample())
    assert '"t" -> "n" [label="a", style=dotted];' in text
    assert "label=\"flag\";" in text
    assert "eq" not in text


def test_half_unary_values_are_marked():
    s = sample().edit().set("is[node]", "t", 0.5).freeze()
    text = export_dot(s)
    assert "is[node]=1/2" in text


def test_initial_state_of_builtin_model():
    m = builtin_model("inc_si")
    text = export_dot(m.initial[0], m.name)
    assert text.count("->") >= 3
    assert "x" in text
