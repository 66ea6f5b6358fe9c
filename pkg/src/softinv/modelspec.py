"""Model files: parsing, serialization, soft-invariant expansion, built-in models.

A model file is line oriented.  ``#`` starts a comment.  Sections::

    %name inc_si
    %predicates
    core is[thread] unary abs            # core NAME ARITY [abs] [functional] [unique]
    instr has[a](v) abs := exists u. a(v, u)
    %locations abs                       # optional "abs": location predicates are abstraction predicates
    idle line3 line4
    %soft                                # [NAME =] LOCATION : BODY(v)
    line4 : has[a](v)
    %actions
    action read_x : line3 -> line4
        focus exists u. b(t, u)
        guard exists u. x(u)
        alloc is[node]
        update a(t, v) := x(v)
        dealloc v : FORMULA(v)
    %constraints                         # BODY ==> HEAD over the free variables
    %init                                # one abstract initial structure
    T* : is[thread] at[idle]             # "*" marks a summary individual
    next(NX, NS) = 1/2
    %property
    exists v. x(v)
    %concrete                            # template for bounded concrete initial states
    threads : is[thread] at[idle]
    nodes : is[node]
    N0 : x
    ring next

Location ``L`` declares the core unary predicate ``at[L]``.  A soft invariant
``L : body`` declares ``pif[L,p](v) <-> is[thread](v) & (at[L](v) -> body)``
(``pnif[L,p]`` for a negated literal body); soft invariants are never
abstraction predicates.
"""
from __future__ import annotations

import functools
import os
from dataclasses import dataclass, replace
from importlib import resources
from typing import Iterable

from .evaluation import recompute_instrumentation
from .formula import (Atom, Formula, FormulaSyntaxError, Implies, Not, atom, conj, parse_formula,
                      render)
from .logic import LogicValue
from .structure import ContractError, PredicateDecl, Structure, Vocabulary
from .transformer import (FRESH, THREAD, ActionSpec, Constraint, ModelError, Update, coerce,
                          compile_constraints, focus_shape)

ARITY = {"nullary": 0, "unary": 1, "binary": 2}
ARITY_NAME = {v: k for k, v in ARITY.items()}


class ModelSyntaxError(ModelError):
    def __init__(self, message: str, line: int, column: int = 1):
        self.line = line
        self.column = column
        self.message = message
        super().__init__(f"line {line}, column {column}: {message}")


@dataclass(frozen=True)
class SoftInvariantDecl:
    location: str
    body: Formula
    name: str

    @property
    def decl(self) -> PredicateDecl:
        definition = conj(atom("is[thread]", "v"), Implies(atom(at(self.location), "v"), self.body))
        return PredicateDecl(self.name, 1, "instrumentation", definition, ("v",))


def at(location: str) -> str:
    return f"at[{location}]"


def soft_invariant_name(location: str, body: Formula) -> str:
    if isinstance(body, Atom) and body.args == ("v",):
        return f"pif[{location},{body.pred}]"
    if isinstance(body, Not) and isinstance(body.body, Atom) and body.body.args == ("v",):
        return f"pnif[{location},{body.body.pred}]"
    raise ModelError(f"soft invariant at {location} with body {body} needs an explicit name")


@dataclass(frozen=True)
class InitIndividual:
    name: str
    summary: bool
    values: tuple[tuple[str, LogicValue], ...]


@dataclass(frozen=True)
class InitTuple:
    pred: str
    args: tuple[str, ...]
    value: LogicValue


@dataclass(frozen=True)
class ConcreteTemplate:
    threads: tuple[str, ...] = ()
    nodes: tuple[str, ...] = ()
    extra: tuple[tuple[str, tuple[str, ...]], ...] = ()
    rings: tuple[str, ...] = ()


@dataclass(frozen=True)
class ModelSpec:
    name: str
    predicates: tuple[PredicateDecl, ...]
    locations: tuple[str, ...]
    actions: tuple[ActionSpec, ...]
    init_individuals: tuple[InitIndividual, ...]
    init_tuples: tuple[InitTuple, ...]
    property: Formula
    soft_invariants: tuple[SoftInvariantDecl, ...] = ()
    user_constraints: tuple[Constraint, ...] = ()
    concrete: ConcreteTemplate | None = None
    locations_abstract: bool = False

    # -- derived views --------------------------------------------------
    @functools.cached_property
    def vocab(self) -> Vocabulary:
        return Vocabulary(self.predicates + tuple(si.decl for si in self.soft_invariants))

    @property
    def abstraction_set(self) -> tuple[str, ...]:
        return self.vocab.abstraction_set

    @functools.cached_property
    def constraints(self) -> tuple[Constraint, ...]:
        return compile_constraints(self.vocab, location_constraints(self.locations) + self.user_constraints)

    @functools.cached_property
    def initial(self) -> tuple[Structure, ...]:
        return (build_initial(self),)

    def concrete_initial(self, threads: int, nodes: int) -> Structure:
        return build_concrete(self, threads, nodes)

    def action(self, name: str) -> ActionSpec:
        for a in self.actions:
            if a.name == name:
                return a
        raise KeyError(name)

    def without_soft_invariants(self, name: str | None = None) -> "ModelSpec":
        return replace(self, soft_invariants=(), name=name or f"{self.name}_no_si")

    def with_soft_invariants(self, extra: Iterable[SoftInvariantDecl], name: str | None = None) -> "ModelSpec":
        return replace(self, soft_invariants=self.soft_invariants + tuple(extra),
                       name=name or self.name)


def location_constraints(locations: tuple[str, ...]) -> tuple[Constraint, ...]:
    """Every thread is at exactly one location; only threads have a location."""
    out = []
    for l in locations:
        here = atom(at(l), "v")
        others = [Not(atom(at(k), "v")) for k in locations if k != l]
        out.append(Constraint(("v",), here, conj(atom("is[thread]", "v"), *others), "location"))
        if others:
            out.append(Constraint(("v",), conj(atom("is[thread]", "v"), *others), here, "location"))
    return tuple(out)


def expand_soft_invariants(m: ModelSpec) -> ModelSpec:
    """Turn each soft invariant into an ordinary (non-abstraction) instrumentation predicate."""
    taken = {d.name for d in m.predicates}
    decls = []
    for si in m.soft_invariants:
        if si.name in taken:
            raise ModelError(f"soft invariant name {si.name} collides with a declared predicate")
        taken.add(si.name)
        decls.append(si.decl)
    return replace(m, predicates=m.predicates + tuple(decls), soft_invariants=())


# ------------------------------------------------------------ structures

def build_initial(m: ModelSpec) -> Structure:
    vocab = m.vocab
    names = [i.name for i in m.init_individuals]
    s = Structure.empty(vocab, names, [i.name for i in m.init_individuals if i.summary])
    b = s.edit()
    given: list[tuple[str, tuple[str, ...], LogicValue]] = []
    for ind in m.init_individuals:
        for p, v in ind.values:
            given.append((p, (ind.name,), v))
    for tup in m.init_tuples:
        given.append((tup.pred, tup.args, tup.value))
    for p, args, v in given:
        if vocab[p].arity != len(args):
            raise ModelError(f"initial value for {p} has {len(args)} arguments")
        if not vocab[p].instrumentation:
            b.set(p, args, v)
    s = recompute_instrumentation(b.freeze())
    b = s.edit()
    for p, args, v in given:
        if vocab[p].instrumentation:
            cur = s.get(p, *args)
            if cur.definite and cur is not v:
                raise ModelError(f"initial value {p}({', '.join(args)}) = {v} contradicts its definition ({cur})")
            b.set(p, args, v)
    s = coerce(b.freeze(), m.constraints)
    if s is None:
        raise ModelError(f"initial structure of {m.name} is inconsistent")
    return s


def build_concrete(m: ModelSpec, threads: int, nodes: int) -> Structure:
    tpl = m.concrete
    if tpl is None:
        raise ModelError(f"model {m.name} has no %concrete section")
    if threads < 1 or nodes < 1:
        raise ContractError("bounds must be positive")
    tnames = [f"T{i}" for i in range(threads)] if tpl.threads else []
    nnames = [f"N{i}" for i in range(nodes)] if tpl.nodes else []
    s = Structure.empty(m.vocab, tnames + nnames)
    b = s.edit()
    for group, preds in ((tnames, tpl.threads), (nnames, tpl.nodes)):
        for u in group:
            for p in preds:
                b.set(p, u, 1)
    for u, preds in tpl.extra:
        if u not in b._index:
            raise ModelError(f"%concrete names {u}, which is not created at this bound")
        for p in preds:
            b.set(p, u, 1)
    for p in tpl.rings:
        for i, u in enumerate(nnames):
            b.set(p, (u, nnames[(i + 1) % len(nnames)]), 1)
    return recompute_instrumentation(b.freeze())


# ------------------------------------------------------------- parsing

_SECTIONS = ("name", "predicates", "locations", "soft", "actions", "constraints", "init",
             "property", "concrete")


def _strip(line: str) -> str:
    for i, c in enumerate(line):
        if c == "#":
            return line[:i].rstrip()
    return line.rstrip()


def _formula(text: str, lineno: int, col: int) -> Formula:
    try:
        return parse_formula(text)
    except FormulaSyntaxError as e:
        raise ModelSyntaxError(f"bad formula: {e}", lineno, col + e.pos) from None


def _check_formula(f: Formula, vocab_arity: dict[str, int], lineno: int, allowed: set[str] | None,
                   what: str) -> None:
    for a in f.atoms():
        if a.pred not in vocab_arity:
            raise ModelSyntaxError(f"{what}: undeclared predicate {a.pred}", lineno)
        if vocab_arity[a.pred] != len(a.args):
            raise ModelSyntaxError(f"{what}: {a.pred} takes {vocab_arity[a.pred]} arguments", lineno)
    if allowed is not None:
        extra = f.free_vars() - allowed
        if extra:
            raise ModelSyntaxError(f"{what}: unbound variables {sorted(extra)}", lineno)


def _values(tokens: list[str], lineno: int) -> tuple[tuple[str, LogicValue], ...]:
    out = []
    for tok in tokens:
        if "=" in tok:
            p, v = tok.split("=", 1)
            try:
                out.append((p, LogicValue.of(v)))
            except ValueError:
                raise ModelSyntaxError(f"bad value {v!r}", lineno) from None
        else:
            out.append((tok, LogicValue.TRUE))
    return tuple(out)


def parse_model(text: str, name: str | None = None) -> ModelSpec:
    """Parse and validate a model file; errors carry line and column."""
    sections: dict[str, list[tuple[int, str]]] = {s: [] for s in _SECTIONS}
    headers: dict[str, str] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip(raw)
        if not line.strip():
            continue
        if line.startswith("%"):
            word, _, rest = line[1:].partition(" ")
            if word not in sections:
                raise ModelSyntaxError(f"unknown section %{word}", lineno)
            current = word
            headers[word] = rest.strip()
            continue
        if current is None:
            raise ModelSyntaxError("text before the first section", lineno)
        sections[current].append((lineno, line))

    model_name = name or headers.get("name") or "model"

    # predicates ----------------------------------------------------------
    core: list[PredicateDecl] = []
    instr_lines: list[tuple[int, str, tuple[str, ...], set[str], str, int]] = []
    for lineno, line in sections["predicates"]:
        body = line.strip()
        col = len(line) - len(line.lstrip()) + 1
        if body.startswith("core "):
            parts = body.split()
            if len(parts) < 3 or parts[2] not in ARITY:
                raise ModelSyntaxError("expected: core NAME nullary|unary|binary [flags]", lineno, col)
            flags = set(parts[3:])
            bad = flags - {"abs", "functional", "unique"}
            if bad:
                raise ModelSyntaxError(f"unknown flags {sorted(bad)}", lineno, col)
            try:
                core.append(PredicateDecl(parts[1], ARITY[parts[2]], "core",
                                          abstraction="abs" in flags,
                                          functional="functional" in flags,
                                          unique="unique" in flags))
            except ContractError as e:
                raise ModelSyntaxError(str(e), lineno, col) from None
        elif body.startswith("instr "):
            head, sep, rhs = body[6:].partition(":=")
            if not sep:
                raise ModelSyntaxError("expected ':=' in instrumentation declaration", lineno, col)
            head = head.strip()
            if "(" not in head:
                raise ModelSyntaxError("expected NAME(params)", lineno, col)
            close = head.rfind(")")
            pname = head[:head.index("(", _name_end(head))]
            params = tuple(p.strip() for p in head[len(pname) + 1:close].split(",") if p.strip())
            flags = set(head[close + 1:].split())
            bad = flags - {"abs"}
            if bad:
                raise ModelSyntaxError(f"unknown flags {sorted(bad)}", lineno, col)
            instr_lines.append((lineno, pname, params, flags, rhs, col + 6 + len(head) + 2))
        else:
            raise ModelSyntaxError("expected 'core' or 'instr'", lineno, col)

    locations: list[str] = []
    for lineno, line in sections["locations"]:
        locations.extend(line.split())
    locations_abstract = headers.get("locations", "") == "abs"
    if headers.get("locations", "") not in ("", "abs"):
        raise ModelSyntaxError("%locations takes only the optional flag 'abs'", 0)
    loc_decls = [PredicateDecl(at(l), 1, "core", abstraction=locations_abstract) for l in locations]

    decls: list[PredicateDecl] = core + loc_decls
    arity = {"eq": 2, **{d.name: d.arity for d in decls}}
    for lineno, pname, params, flags, rhs, col in instr_lines:
        f = _formula(rhs.strip(), lineno, col)
        if pname in arity:
            raise ModelSyntaxError(f"predicate {pname} declared twice", lineno)
        for a in f.atoms():
            if a.pred == pname:
                raise ModelSyntaxError(f"cyclic instrumentation definition of {pname}", lineno)
        _check_formula(f, arity, lineno, set(params), f"definition of {pname}")
        try:
            decls.append(PredicateDecl(pname, len(params), "instrumentation", f, params,
                                       abstraction="abs" in flags))
        except ContractError as e:
            raise ModelSyntaxError(str(e), lineno) from None
        arity[pname] = len(params)

    # soft invariants ---------------------------------------------------
    softs: list[SoftInvariantDecl] = []
    for lineno, line in sections["soft"]:
        lhs, sep, body = line.partition(":")
        if not sep:
            raise ModelSyntaxError("expected [NAME =] LOCATION : BODY", lineno)
        sname, eqsign, loc = lhs.rpartition("=")
        loc = loc.strip()
        if loc not in locations:
            raise ModelSyntaxError(f"unknown location {loc}", lineno)
        f = _formula(body.strip(), lineno, len(lhs) + 2)
        _check_formula(f, arity, lineno, {"v"}, "soft invariant")
        try:
            nm = sname.strip() if eqsign else soft_invariant_name(loc, f)
        except ModelError as e:
            raise ModelSyntaxError(str(e), lineno) from None
        if nm in arity:
            raise ModelSyntaxError(f"soft invariant name {nm} collides with a declared predicate", lineno)
        arity[nm] = 1
        softs.append(SoftInvariantDecl(loc, f, nm))
    if softs and "is[thread]" not in arity:
        raise ModelSyntaxError("soft invariants need the predicate is[thread]", sections["soft"][0][0])

    # actions -------------------------------------------------------------
    actions: list[ActionSpec] = []
    cur: dict | None = None

    def close():
        if cur is not None:
            actions.append(ActionSpec(cur["name"], cur["source"], cur["target"], cur["guard"],
                                      tuple(cur["focus"]), tuple(cur["updates"]),
                                      cur["alloc"], cur["dealloc"]))

    for lineno, line in sections["actions"]:
        body = line.strip()
        col = len(line) - len(line.lstrip()) + 1
        word, _, rest = body.partition(" ")
        if word == "action":
            close()
            aname, sep, locs = rest.partition(":")
            src, arrow, dst = locs.partition("->")
            if not sep or not arrow:
                raise ModelSyntaxError("expected: action NAME : FROM -> TO", lineno, col)
            src, dst = src.strip(), dst.strip()
            for l in (src, dst):
                if l not in locations:
                    raise ModelSyntaxError(f"unknown location {l}", lineno, col)
            cur = dict(name=aname.strip(), source=at(src), target=at(dst), guard=None, focus=[],
                       updates=[], alloc=None, dealloc=None)
            continue
        if cur is None:
            raise ModelSyntaxError("action clause outside an action", lineno, col)
        scope = {THREAD} | ({FRESH} if cur["alloc"] is not None else set())
        fcol = col + len(word) + 1
        if word == "guard":
            f = _formula(rest, lineno, fcol)
            _check_formula(f, arity, lineno, scope, "guard")
            cur["guard"] = f
        elif word == "focus":
            f = _formula(rest, lineno, fcol)
            _check_formula(f, arity, lineno, scope, "focus")
            try:
                focus_shape(f)
            except ModelError as e:
                raise ModelSyntaxError(str(e), lineno, fcol) from None
            cur["focus"].append(f)
        elif word == "alloc":
            preds = tuple(rest.split())
            for p in preds:
                if arity.get(p) != 1:
                    raise ModelSyntaxError(f"alloc: {p} is not a unary predicate", lineno, fcol)
            cur["alloc"] = preds
        elif word == "dealloc":
            f = _formula(rest.partition(":")[2].strip() if ":" in rest else rest, lineno, fcol)
            _check_formula(f, arity, lineno, scope | {"v"}, "dealloc")
            cur["dealloc"] = f
        elif word == "update":
            lhs, sep, rhs = rest.partition(":=")
            if not sep:
                raise ModelSyntaxError("expected: update P(args) := FORMULA", lineno, fcol)
            target = _formula(lhs.strip(), lineno, fcol)
            if not isinstance(target, Atom):
                raise ModelSyntaxError("update target must be an atom", lineno, fcol)
            if target.pred not in arity:
                raise ModelSyntaxError(f"update of undeclared predicate {target.pred}", lineno, fcol)
            if target.pred == "eq" or any(d.name == target.pred and d.instrumentation for d in decls):
                raise ModelSyntaxError(f"cannot update {target.pred}", lineno, fcol)
            if arity[target.pred] != len(target.args):
                raise ModelSyntaxError(f"{target.pred} takes {arity[target.pred]} arguments", lineno, fcol)
            slots = [a for a in target.args if a not in scope]
            if len(set(slots)) != len(slots):
                raise ModelSyntaxError("repeated update variable", lineno, fcol)
            f = _formula(rhs.strip(), lineno, fcol + len(lhs) + 2)
            _check_formula(f, arity, lineno, scope | set(slots), "update")
            cur["updates"].append(Update(target.pred, target.args, f))
        else:
            raise ModelSyntaxError(f"unknown action clause {word!r}", lineno, col)
    close()

    # constraints -----------------------------------------------------------
    user: list[Constraint] = []
    for lineno, line in sections["constraints"]:
        lhs, sep, rhs = line.partition("==>")
        if not sep:
            raise ModelSyntaxError("expected BODY ==> HEAD", lineno)
        b = _formula(lhs.strip(), lineno, 1)
        h = _formula(rhs.strip(), lineno, len(lhs) + 4)
        _check_formula(b, arity, lineno, None, "constraint")
        _check_formula(h, arity, lineno, None, "constraint")
        user.append(Constraint(tuple(sorted(b.free_vars() | h.free_vars())), b, h, "user"))

    # init ----------------------------------------------------------------
    inds: list[InitIndividual] = []
    tuples: list[InitTuple] = []
    for lineno, line in sections["init"]:
        body = line.strip()
        if "(" in body.split(":")[0] and "=" in body or body.endswith(")"):
            lhs, _, val = body.partition("=") if "=" in body else (body, "", "1")
            t = _formula(lhs.strip(), lineno, 1)
            if not isinstance(t, Atom) or t.pred not in arity:
                raise ModelSyntaxError(f"bad initial tuple {lhs.strip()!r}", lineno)
            tuples.append(InitTuple(t.pred, t.args, _values([f"x={val.strip()}"], lineno)[0][1]))
            continue
        lhs, sep, rest = body.partition(":")
        if not sep:
            raise ModelSyntaxError("expected NAME[*] : PREDICATES or P(args) = VALUE", lineno)
        nm = lhs.strip()
        summary = nm.endswith("*")
        vals = _values(rest.split(), lineno)
        for p, _ in vals:
            if arity.get(p) != 1:
                raise ModelSyntaxError(f"{p} is not a unary predicate", lineno)
        inds.append(InitIndividual(nm.rstrip("*"), summary, vals))
    known = {i.name for i in inds}
    for t in tuples:
        for a in t.args:
            if a not in known:
                raise ModelSyntaxError(f"initial tuple names unknown individual {a}", 0)

    # property --------------------------------------------------------------
    prop_lines = sections["property"]
    if not prop_lines:
        raise ModelSyntaxError("missing %property", 0)
    prop = _formula(" ".join(l.strip() for _, l in prop_lines), prop_lines[0][0], 1)
    _check_formula(prop, arity, prop_lines[0][0], set(), "property")

    # concrete --------------------------------------------------------------
    concrete = None
    if sections["concrete"]:
        threads: tuple[str, ...] = ()
        nodes: tuple[str, ...] = ()
        extra: list[tuple[str, tuple[str, ...]]] = []
        rings: list[str] = []
        for lineno, line in sections["concrete"]:
            body = line.strip()
            if body.startswith("ring "):
                p = body[5:].strip()
                if arity.get(p) != 2:
                    raise ModelSyntaxError(f"ring needs a binary predicate, got {p}", lineno)
                rings.append(p)
                continue
            lhs, sep, rest = body.partition(":")
            if not sep:
                raise ModelSyntaxError("expected threads|nodes|NAME : PREDICATES", lineno)
            preds = tuple(rest.split())
            for p in preds:
                if arity.get(p) != 1:
                    raise ModelSyntaxError(f"{p} is not a unary predicate", lineno)
            key = lhs.strip()
            if key == "threads":
                threads = preds
            elif key == "nodes":
                nodes = preds
            else:
                extra.append((key, preds))
        concrete = ConcreteTemplate(threads, nodes, tuple(extra), tuple(rings))

    m = ModelSpec(model_name, tuple(decls), tuple(locations), tuple(actions), tuple(inds),
                  tuple(tuples), prop, tuple(softs), tuple(user), concrete, locations_abstract)
    try:
        m.vocab
    except ContractError as e:
        raise ModelSyntaxError(str(e), 0) from None
    return m


def _name_end(head: str) -> int:
    """Index just past a predicate name, skipping a balanced bracket suffix."""
    i = 0
    depth = 0
    while i < len(head):
        c = head[i]
        if c == "[":
            depth += 1
        elif c == "]":
            depth -= 1
        elif c == "(" and depth == 0:
            return i
        i += 1
    return i


def load_model(path) -> ModelSpec:
    with open(path, encoding="utf-8") as fh:
        return parse_model(fh.read())


# ---------------------------------------------------------- serialization

def serialize_model(m: ModelSpec) -> str:
    out = [f"%name {m.name}", "%predicates"]
    locs = {at(l) for l in m.locations}
    for d in m.predicates:
        if d.name in locs:
            continue
        if d.instrumentation:
            flags = " abs" if d.abstraction else ""
            out.append(f"instr {d.name}({', '.join(d.params)}){flags} := {render(d.definition)}")
        else:
            flags = [f for f, on in (("abs", d.abstraction), ("functional", d.functional),
                                     ("unique", d.unique)) if on]
            out.append(" ".join(["core", d.name, ARITY_NAME[d.arity]] + flags))
    out.append("%locations abs" if m.locations_abstract else "%locations")
    out.append(" ".join(m.locations))
    if m.soft_invariants:
        out.append("%soft")
        for si in m.soft_invariants:
            out.append(f"{si.name} = {si.location} : {render(si.body)}")
    out.append("%actions")
    for a in m.actions:
        out.append(f"action {a.name} : {a.source[3:-1]} -> {a.target[3:-1]}")
        if a.allocates is not None:
            out.append(f"    alloc {' '.join(a.allocates)}")
        for f in a.focus:
            out.append(f"    focus {render(f)}")
        if a.guard is not None:
            out.append(f"    guard {render(a.guard)}")
        for u in a.updates:
            out.append(f"    update {u.pred}({', '.join(u.args)}) := {render(u.formula)}")
        if a.deallocates is not None:
            out.append(f"    dealloc v : {render(a.deallocates)}")
    if m.user_constraints:
        out.append("%constraints")
        for c in m.user_constraints:
            out.append(f"{render(c.body)} ==> {render(c.head)}")
    out.append("%init")
    for ind in m.init_individuals:
        vals = " ".join(p if v is LogicValue.TRUE else f"{p}={v}" for p, v in ind.values)
        out.append(f"{ind.name}{'*' if ind.summary else ''} : {vals}")
    for t in m.init_tuples:
        out.append(f"{t.pred}({', '.join(t.args)}) = {t.value}")
    out.append("%property")
    out.append(render(m.property))
    if m.concrete is not None:
        c = m.concrete
        out.append("%concrete")
        if c.threads:
            out.append(f"threads : {' '.join(c.threads)}")
        if c.nodes:
            out.append(f"nodes : {' '.join(c.nodes)}")
        for u, preds in c.extra:
            out.append(f"{u} : {' '.join(preds)}")
        for p in c.rings:
            out.append(f"ring {p}")
    return "\n".join(out) + "\n"


# ------------------------------------------------------------- built-ins

BUILTIN_FILES = {
    "inc_full_A": "inc_full_A.tvm",
    "inc_collapsed_no_si": "inc_collapsed_no_si.tvm",
    "inc_si": "inc_si.tvm",
    "inc_si_over": "inc_si_over.tvm",
    "stack_si": "stack_si.tvm",
}


def model_text(name: str) -> str:
    try:
        fname = BUILTIN_FILES[name]
    except KeyError:
        raise KeyError(f"no built-in model {name!r}; known: {', '.join(BUILTIN_FILES)}") from None
    return resources.files("softinv.models").joinpath(fname).read_text(encoding="utf-8")


@functools.lru_cache(maxsize=None)
def builtin_model(name: str) -> ModelSpec:
    if name == "stack_no_si":
        return builtin_model("stack_si").without_soft_invariants("stack_no_si")
    return parse_model(model_text(name), name)


def builtin_models() -> dict[str, ModelSpec]:
    return {name: builtin_model(name) for name in BUILTIN_FILES}


def resolve_model(name_or_path: str) -> ModelSpec:
    """A built-in model by name, or a model file by path."""
    if name_or_path in BUILTIN_FILES or name_or_path == "stack_no_si":
        return builtin_model(name_or_path)
    if not os.path.exists(name_or_path):
        raise ModelError(f"{name_or_path!r} is neither a built-in model nor a model file")
    return load_model(name_or_path)
