"""Abstract transformers: materialization, focus, coerce and action application.

An action is executed by a single thread, bound to the variable ``t``.  The
pipeline for one action on one abstract structure is:

1. materialize ``t`` out of a summary thread if necessary, and focus the
   location literal and the action's focus formulas so the values the
   action reads become definite;
2. coerce, dropping structures that represent no concrete state;
3. keep structures where the guard is 1 or 1/2;
4. apply core updates simultaneously (all right-hand sides read the
   pre-state), allocation, and the location change;
5. refresh instrumentation predicates whose definitions read a changed tuple;
6. coerce again;
7. canonically abstract.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .abstraction import canonical_abstract, canonical_key
from .evaluation import eval_array, refresh_instrumentation
from .formula import (And, Atom, Const, Exists, Forall, Formula, Iff, Implies, Not, Or,
                      atom, conj, eq)
from .logic import DTYPE, FALSE, HALF, TRUE
from .structure import ContractError, Structure, Vocabulary

THREAD = "t"
FRESH = "new"


class ModelError(ValueError):
    """A model is malformed (raised while loading, never during exploration)."""


@dataclass(frozen=True)
class Update:
    """``pred(args) := formula``; ``t`` in ``args`` restricts the update to the acting thread's tuples."""

    pred: str
    args: tuple[str, ...]
    formula: Formula

    def __str__(self):
        return f"{self.pred}({', '.join(self.args)}) := {self.formula}"


@dataclass(frozen=True)
class ActionSpec:
    name: str
    source: str
    target: str
    guard: Formula | None = None
    focus: tuple[Formula, ...] = ()
    updates: tuple[Update, ...] = ()
    allocates: tuple[str, ...] | None = None
    deallocates: Formula | None = None

    @property
    def from_location(self) -> str:
        return self.source

    @property
    def to_location(self) -> str:
        return self.target


@dataclass(frozen=True)
class Constraint:
    """``body -> head`` for every assignment to ``vars``; valid in every concrete state."""

    vars: tuple[str, ...]
    body: Formula
    head: Formula
    origin: str = "user"
    reads: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        reads = frozenset(a.pred for f in (self.body, self.head) for a in f.atoms())
        object.__setattr__(self, "reads", reads)

    def __str__(self):
        return f"[{self.origin}] {self.body} ==> {self.head}"


# ----------------------------------------------------------- constraints

def compile_constraints(vocab: Vocabulary, extra: Iterable[Constraint] = ()) -> tuple[Constraint, ...]:
    out: list[Constraint] = []
    for d in vocab:
        if d.instrumentation:
            head = Atom(d.name, d.params)
            phi = d.definition
            out += [
                Constraint(d.params, head, phi, "instrumentation-definition"),
                Constraint(d.params, Not(head), Not(phi), "instrumentation-definition"),
                Constraint(d.params, phi, head, "instrumentation-definition"),
                Constraint(d.params, Not(phi), Not(head), "instrumentation-definition"),
            ]
        if d.functional:
            vs = ("_v", "_w1", "_w2")
            f1, f2 = atom(d.name, "_v", "_w1"), atom(d.name, "_v", "_w2")
            out += [
                Constraint(vs, conj(f1, f2), eq("_w1", "_w2"), "functional"),
                Constraint(vs, conj(f1, Not(eq("_w1", "_w2"))), Not(f2), "functional"),
            ]
        if d.unique:
            vs = ("_v1", "_v2")
            p1, p2 = atom(d.name, "_v1"), atom(d.name, "_v2")
            out += [
                Constraint(vs, conj(p1, p2), eq("_v1", "_v2"), "unique"),
                Constraint(vs, conj(p1, Not(eq("_v1", "_v2"))), Not(p2), "unique"),
            ]
    out.extend(extra)
    return tuple(out)


class _Inconsistent(Exception):
    pass


class _Scratch:
    """Mutable interpretation used while coercing; quacks like a Structure for evaluation."""

    def __init__(self, s: Structure):
        self.vocab = s.vocab
        self.universe = s.universe
        self.values = {k: np.array(v) for k, v in s.values.items()}
        self.changed = False
        self.version = 0
        self.touched: set[str] = set()
        self._cache: dict = {}

    def array(self, f: Formula, order: tuple[str, ...]) -> np.ndarray:
        # keyed by identity; the entry holds f so its id stays unique
        hit = self._cache.get((id(f), order))
        if hit is not None and hit[0] == self.version:
            return hit[1]
        if isinstance(f, Not):
            a = TRUE - self.array(f.body, order)
        elif isinstance(f, And):
            a = np.minimum.reduce([self.array(p, order) for p in f.parts])
        elif isinstance(f, Or):
            a = np.maximum.reduce([self.array(p, order) for p in f.parts])
        elif isinstance(f, Implies):
            a = np.maximum(TRUE - self.array(f.left, order), self.array(f.right, order))
        else:
            a = eval_array(self, f, order)
        self._cache[(id(f), order)] = (self.version, a, f)
        return a

    def value_at(self, f: Formula, env: dict[str, int]) -> int:
        order = tuple(sorted(f.free_vars()))
        a = self.array(f, order)
        return int(a[tuple(env[v] for v in order)])

    def force(self, f: Formula, env: dict[str, int], target: int) -> None:
        """Make ``f`` evaluate to ``target`` (0 or 2) under ``env``, or raise _Inconsistent."""
        if isinstance(f, Atom):
            idx = tuple(env[a] for a in f.args)
            arr = self.values[f.pred]
            cur = arr[idx]
            if cur == target:
                return
            if cur != HALF:
                raise _Inconsistent
            arr[idx] = target
            self.changed = True
            self.version += 1
            self.touched.add(f.pred)
            return
        if isinstance(f, Not):
            self.force(f.body, env, TRUE - target)
            return
        if isinstance(f, Const):
            if f.value.value not in (target, HALF):
                raise _Inconsistent
            return
        if isinstance(f, Implies):
            self.force(Or((Not(f.left), f.right)), env, target)
            return
        if isinstance(f, (And, Or)):
            absorbing = FALSE if isinstance(f, And) else TRUE
            if target != absorbing:
                for p in f.parts:
                    self.force(p, env, target)
                return
            vals = [self.value_at(p, env) for p in f.parts]
            if absorbing in vals:
                return
            open_parts = [p for p, v in zip(f.parts, vals) if v == HALF]
            if not open_parts:
                raise _Inconsistent
            if len(open_parts) == 1:
                self.force(open_parts[0], env, absorbing)
            return
        if isinstance(f, Iff):
            lv, rv = self.value_at(f.left, env), self.value_at(f.right, env)
            if target == TRUE:
                if lv != HALF:
                    self.force(f.right, env, lv)
                elif rv != HALF:
                    self.force(f.left, env, rv)
            else:
                if lv != HALF:
                    self.force(f.right, env, TRUE - lv)
                elif rv != HALF:
                    self.force(f.left, env, TRUE - rv)
            return
        if isinstance(f, (Exists, Forall)):
            # the witness side: exists forced true / forall forced false
            witness = TRUE if isinstance(f, Exists) else FALSE
            inner = {k: v for k, v in env.items() if k not in f.vars}
            order = tuple(sorted(f.body.free_vars()))
            arr = self.array(f.body, order)
            fixed = tuple(inner.get(v, slice(None)) if v not in f.vars else slice(None) for v in order)
            sub = arr[fixed]
            qvars = [v for v in order if v in f.vars]
            if target != witness:
                # every instance must take the target value
                for pos in zip(*np.nonzero(sub != target)) if qvars else ([()] if sub != target else []):
                    self.force(f.body, {**inner, **dict(zip(qvars, pos))}, target)
                return
            if (sub == witness).any():
                return
            cands = list(zip(*np.nonzero(sub != TRUE - witness))) if qvars else ([()] if sub != TRUE - witness else [])
            if not cands:
                raise _Inconsistent
            if len(cands) == 1:
                pos = cands[0]
                diag = np.diagonal(self.values["eq"])
                if all(diag[i] == TRUE for i in pos):
                    self.force(f.body, {**inner, **dict(zip(qvars, pos))}, target)
            return
        raise TypeError(f)

    def freeze(self) -> Structure:
        return Structure(self.vocab, self.universe, self.values)


def coerce(s: Structure, constraints: Sequence[Constraint],
           dirty: Iterable[str] | None = None) -> Structure | None:
    """Sharpen ``s`` to a fixpoint of ``constraints``; ``None`` if it represents no concrete state.

    ``dirty`` promises that ``s`` satisfies every constraint not reading one
    of those predicates, so only the others are checked first.
    """
    w = _Scratch(s)
    if dirty is None:
        active = list(constraints)
    else:
        dirty = set(dirty)
        active = [c for c in constraints if not dirty.isdisjoint(c.reads)]
    try:
        while active:
            w.touched = set()
            for c in active:
                body = w.array(c.body, c.vars)
                head = w.array(c.head, c.vars)
                viol = (body == TRUE) & (head != TRUE)
                if not viol.any():
                    continue
                for pos in np.argwhere(viol):
                    pos = tuple(int(i) for i in pos)
                    # earlier forcing in this loop may already have settled it
                    if w.value_at(c.head, dict(zip(c.vars, pos))) == TRUE:
                        continue
                    w.force(c.head, dict(zip(c.vars, pos)), TRUE)
            active = [c for c in constraints if not w.touched.isdisjoint(c.reads)]
    except _Inconsistent:
        return None
    return w.freeze()


# --------------------------------------------------------- materialization

def _fresh_name(s: Structure | _Scratch, base: str) -> str:
    taken = set(s.universe)
    k = 1
    while f"{base}.{k}" in taken:
        k += 1
    return f"{base}.{k}"


def duplicate(s: Structure, u: str, name: str | None = None) -> tuple[Structure, str]:
    """Copy individual ``u`` (all its tuples) into a new individual, distinct from ``u``."""
    i = s.index(u)
    name = name or _fresh_name(s, u)
    n = len(s.universe)
    idx = np.r_[np.arange(n), i]
    vals = {}
    for k, a in s.values.items():
        if a.ndim == 1:
            vals[k] = a[idx]
        elif a.ndim == 2:
            vals[k] = a[np.ix_(idx, idx)]
        else:
            vals[k] = a
    e = np.array(vals["eq"])
    e[n, i] = e[i, n] = FALSE
    vals["eq"] = e
    return Structure(s.vocab, s.universe + (name,), vals), name


def materialize(s: Structure, u: str) -> list[tuple[Structure, str]]:
    """Cases for picking one concrete individual out of ``u``.

    For a summary ``u``: either it stands for exactly one individual, or a
    definite copy is split off and ``u`` remains as the (nonempty) residual.
    """
    if not s.is_summary(u):
        return [(s, u)]
    exact = s.edit().set_summary(u, False).freeze()
    split, t = duplicate(s, u)
    split = split.edit().set_summary(t, False).freeze()
    return [(exact, u), (split, t)]


def _set(s: Structure, pred: str, idx: tuple[int, ...], value: int) -> Structure:
    a = np.array(s.values[pred])
    a[idx] = value
    return s.replace(**{pred: a})


def focus_unary(s: Structure, pred: str, u: str) -> list[tuple[Structure, str]]:
    """Make ``pred(u)`` definite.  Returns ``(structure, individual now playing u)`` pairs."""
    i = s.index(u)
    v = s.values[pred][i]
    if v != HALF:
        return [(s, u)]
    if not s.is_summary(u):
        return [(_set(s, pred, (i,), TRUE), u), (_set(s, pred, (i,), FALSE), u)]
    split, t = duplicate(s, u)
    split = split.edit().set_summary(t, False).set(pred, t, 1).freeze()
    return [(_set(s, pred, (i,), TRUE), u), (_set(s, pred, (i,), FALSE), u), (split, t)]


def focus_edge(s: Structure, pred: str, u: str) -> list[Structure]:
    """Make every ``pred(u, w)`` definite, splitting summary targets into 1- and 0-parts."""
    if s.is_summary(u):
        return [s]
    functional = s.vocab[pred].functional
    i = s.index(u)
    todo = [int(j) for j in np.flatnonzero(s.values[pred][i] == HALF)]
    out = [s]
    for j in todo:
        nxt = []
        for cur in out:
            ones = int((cur.values[pred][i] == TRUE).sum())
            nxt.append(_set(cur, pred, (i, j), FALSE))
            if functional and ones:
                continue
            nxt.append(_set(cur, pred, (i, j), TRUE))
            if cur.values["eq"][j, j] == HALF:
                split, k = duplicate(cur, cur.universe[j])
                split = _set(split, pred, (i, j), TRUE)
                nxt.append(_set(split, pred, (i, split.index(k)), FALSE))
        out = nxt
    return out


def focus_shape(f: Formula, thread: str = THREAD) -> tuple:
    """Classify a focus formula, raising ModelError for unsupported shapes.

    Supported: ``p(t)`` / ``!p(t)``; ``exists u. p(t, u)``;
    ``exists u, w. p(t, u) & q(u, w)``; ``exists u, w. p(u) & q(u, w)``.
    """
    g = f.body if isinstance(f, Not) else f
    if isinstance(g, Atom) and g.args == (thread,):
        return ("unary", g.pred)
    if isinstance(f, Exists):
        b = f.body
        if len(f.vars) == 1 and isinstance(b, Atom) and b.args == (thread, f.vars[0]):
            return ("edge", b.pred)
        if (len(f.vars) == 2 and isinstance(b, And) and len(b.parts) == 2
                and all(isinstance(p, Atom) for p in b.parts)):
            u, w = f.vars
            p, q = b.parts
            if q.args == (u, w):
                if p.args == (thread, u):
                    return ("chain", p.pred, q.pred)
                if p.args == (u,):
                    return ("global-chain", p.pred, q.pred)
    raise ModelError(f"unsupported focus formula: {f}")


def _coerced(items: Iterable[Structure], constraints, dirty=None) -> list[Structure]:
    if constraints is None:
        return list(items)
    return [c for c in (coerce(s, constraints, dirty) for s in items) if c is not None]


def focus(s: Structure, f: Formula, asg: dict[str, str],
          constraints: Sequence[Constraint] | None = None) -> list[Structure]:
    """Structures jointly covering ``s`` in each of which ``f`` is definite under ``asg``.

    With ``constraints``, intermediate and final results are coerced and
    inconsistent cases dropped.
    """
    return [r for r, _ in _focus(s, f, asg, constraints, clean=False)]


def _focus(s, f, asg, constraints, clean=True) -> list[tuple[Structure, dict[str, str]]]:
    # with ``clean`` the input already satisfies the constraints
    shape = focus_shape(f)
    d = ({"eq", *shape[1:]} if clean else None)
    t = asg.get(THREAD)
    if shape[0] != "global-chain" and t is None:
        raise ContractError(f"focus formula {f} needs a binding for {THREAD}")
    if shape[0] == "unary":
        out = []
        for r, u in focus_unary(s, shape[1], t):
            for c in _coerced([r], constraints, d):
                out.append((c, {**asg, THREAD: u}))
        return out
    if shape[0] == "edge":
        return [(r, asg) for r in _coerced(focus_edge(s, shape[1], t), constraints, d)]
    if shape[0] == "chain":
        p, q = shape[1], shape[2]
        stage = _coerced(focus_edge(s, p, t), constraints, d)
        return [(r, asg) for x in stage for r in _focus_rows(x, q, lambda y: y.values[p][y.index(t)] == TRUE, constraints, d)]
    p, q = shape[1], shape[2]
    stage = [s]
    for u in s.universe:
        if s.values[p][s.index(u)] == HALF and not s.is_summary(u):
            stage = [y for x in stage for y, _ in focus_unary(x, p, u)]
    stage = _coerced(stage, constraints, d)
    return [(r, asg) for x in stage for r in _focus_rows(x, q, lambda y: y.values[p] == TRUE, constraints, d)]


def _focus_rows(s, q, rows_of, constraints, dirty=None):
    out = [s]
    sources = [s.universe[j] for j in np.flatnonzero(rows_of(s))]
    for u in sources:
        nxt = []
        for x in out:
            if u in x.universe and not x.is_summary(u):
                nxt.extend(_coerced(focus_edge(x, q, u), constraints, dirty))
            else:
                nxt.append(x)
        out = nxt
    return out


# ------------------------------------------------------------------ updates

def execute(s: Structure, act: ActionSpec, t: str) -> Structure:
    return _execute(s, act, t)[0]


def _execute(s: Structure, act: ActionSpec, t: str) -> tuple[Structure, set[str] | None]:
    """Apply ``act``'s updates, allocation, deallocation and location change for thread ``t``.

    Values on the returned structure's instrumentation predicates are
    refreshed only where they may have changed.
    """
    written: dict[str, np.ndarray] = {}
    env = {THREAD: t}
    fresh = None
    if act.allocates is not None:
        name = _fresh_name(s, FRESH)
        n = len(s.universe)
        vals = {}
        for k, a in s.values.items():
            if a.ndim == 0:
                vals[k] = a
                continue
            b = np.zeros((n + 1,) * a.ndim, dtype=DTYPE)
            b[(slice(0, n),) * a.ndim] = a
            vals[k] = b
        vals["eq"][n, n] = TRUE
        for p in act.allocates:
            vals[p][n] = TRUE
            m = np.zeros(n + 1, dtype=bool)
            m[n] = True
            written[p] = m
        fresh = n
        s = Structure(s.vocab, s.universe + (name,), vals)
        env[FRESH] = name
    pre = s
    new_vals = {}
    for up in act.updates:
        d = s.vocab[up.pred]
        if d.instrumentation:
            raise ModelError(f"{act.name}: cannot update instrumentation predicate {up.pred}")
        slots = [a for a in up.args if a not in env]
        order = tuple(dict.fromkeys(slots + sorted(up.formula.free_vars() - set(slots))))
        arr = eval_array(pre, up.formula, order)
        fix = tuple(s.index(env[v]) if v in env else slice(None) for v in order)
        arr = arr[fix]
        region = tuple(s.index(env[a]) if a in env else slice(None) for a in up.args)
        old = pre.values[up.pred]
        new = np.array(new_vals.get(up.pred, old))
        new[region] = arr
        new_vals[up.pred] = new
        mask = written.get(up.pred, np.zeros(old.shape, dtype=bool)).copy()
        r = np.zeros(old.shape, dtype=bool)
        r[region] = True
        mask |= r & ((new != old) | (new == HALF))
        written[up.pred] = mask
    ti = s.index(t)
    if act.source != act.target:
        for loc, val in ((act.source, FALSE), (act.target, TRUE)):
            a = np.array(new_vals.get(loc, pre.values[loc]))
            changed = a[ti] != val
            a[ti] = val
            new_vals[loc] = a
            m = written.get(loc, np.zeros(a.shape, dtype=bool)).copy()
            m[ti] |= changed
            written[loc] = m
    s = pre.replace(**new_vals) if new_vals else pre
    if act.deallocates is not None:
        sel = eval_array(s, act.deallocates, ("v",))
        if (sel == HALF).any():
            raise ContractError(f"{act.name}: deallocation target is not definite; focus it first")
        keep = [u for u, v in zip(s.universe, sel) if v != TRUE]
        if len(keep) != len(s.universe):
            s = s.sub(keep)
            written = {d.name: np.ones(s.values[d.name].shape, dtype=bool) for d in s.vocab if not d.instrumentation}
            fresh = None
    s = refresh_instrumentation(s, written, fresh)
    if act.allocates is not None or act.deallocates is not None:
        return s, None
    return s, {k for k, m in written.items() if m.any()}


def enabled_threads(s: Structure, act: ActionSpec) -> list[str]:
    """Individuals that may be at ``act``'s source location."""
    return [u for u, v in zip(s.universe, s.values[act.source]) if v != FALSE]


def apply_action(s: Structure, act: ActionSpec, t: str, constraints: Sequence[Constraint],
                 abstraction: Iterable[str]) -> list[Structure]:
    """All canonically abstract successors of ``s`` when thread ``t`` performs ``act``.

    Successors are deduplicated and returned sorted by canonical key.
    """
    A = tuple(abstraction)
    loc = atom(act.source, THREAD)
    cases: list[tuple[Structure, dict[str, str]]] = []
    for m, u in materialize(s, t):
        for r, asg in _focus(m, loc, {THREAD: u}, constraints, clean=False):
            if r.values[act.source][r.index(asg[THREAD])] == TRUE:
                cases.append((r, asg))
    for f in act.focus:
        cases = [(r, a2) for r, asg in cases for r, a2 in _focus(r, f, asg, constraints)]
    results: dict[bytes, Structure] = {}
    for r, asg in cases:
        if act.guard is not None:
            order = tuple(sorted(act.guard.free_vars()))
            g = eval_array(r, act.guard, order)[tuple(r.index(asg[v]) for v in order)]
            if g == FALSE:
                continue
        post, changed = _execute(r, act, asg[THREAD])
        post = coerce(post, constraints, changed)
        if post is None:
            continue
        ca = canonical_abstract(post, A)
        results.setdefault(canonical_key(ca, A), ca)
    return [results[k] for k in sorted(results)]
