"""Kleene evaluation of formulas over structures.

Evaluation is vectorised: a formula with free variables ``v1..vk`` is
evaluated to an array with one axis per variable, so a single call yields
the value under every assignment.  Quantifiers reduce along an axis (``max``
for exists, ``min`` for forall); a summary individual is one element of the
domain, and its ``eq`` self-value of 1/2 carries the multiplicity.
"""
from __future__ import annotations

from typing import Mapping

import numpy as np

from .formula import And, Atom, Const, Exists, Forall, Formula, Iff, Implies, Not, Or
from .logic import DTYPE, FALSE, HALF, TRUE, LogicValue
from .structure import ContractError, Structure

Axes = tuple[str, ...]


def _expand(axes: Axes, arr: np.ndarray, target: Axes) -> np.ndarray:
    if axes == target:
        return arr
    perm = sorted(range(len(axes)), key=lambda i: target.index(axes[i]))
    arr = arr.transpose(perm) if perm != list(range(len(axes))) else arr
    shape = []
    ordered = [axes[i] for i in perm]
    k = 0
    for t in target:
        if k < len(ordered) and ordered[k] == t:
            shape.append(arr.shape[k])
            k += 1
        else:
            shape.append(1)
    return arr.reshape(shape)


def _union(a: Axes, b: Axes) -> Axes:
    return a + tuple(x for x in b if x not in a)


def _atom_axes(args: tuple[str, ...], arr: np.ndarray) -> tuple[Axes, np.ndarray]:
    if len(args) == 2 and args[0] == args[1]:
        return (args[0],), np.diagonal(arr)
    return args, arr


class _Kleene:
    """Operations for truth-value evaluation."""

    def __init__(self, s: Structure):
        self.s = s
        self.n = len(s.universe)

    def const(self, value: LogicValue):
        return np.asarray(value.value, dtype=DTYPE)

    def atom(self, f: Atom):
        d = self.s.vocab[f.pred]
        if d.arity != len(f.args):
            raise ContractError(f"{f.pred} has arity {d.arity}, used with {len(f.args)} arguments")
        return self.s.values[f.pred]

    def neg(self, a):
        return TRUE - a

    def conj(self, a, b):
        return np.minimum(a, b)

    def disj(self, a, b):
        return np.maximum(a, b)

    def implies(self, a, b):
        return np.maximum(TRUE - a, b)

    def iff(self, a, b):
        return np.minimum(np.maximum(TRUE - a, b), np.maximum(TRUE - b, a))

    def exists(self, a, axis):
        return a.max(axis=axis, initial=FALSE)

    def forall(self, a, axis):
        return a.min(axis=axis, initial=TRUE)

    def vacuous(self, a, existential):
        # quantified variable does not occur in the body
        if self.n:
            return a
        return np.full(a.shape, FALSE if existential else TRUE, dtype=DTYPE)


def _walk(ops, f: Formula) -> tuple[Axes, np.ndarray]:
    if isinstance(f, Atom):
        return _atom_axes(f.args, ops.atom(f))
    if isinstance(f, Not):
        axes, a = _walk(ops, f.body)
        return axes, ops.neg(a)
    if isinstance(f, (And, Or)):
        op = ops.conj if isinstance(f, And) else ops.disj
        axes, acc = _walk(ops, f.parts[0])
        for p in f.parts[1:]:
            pax, pa = _walk(ops, p)
            u = _union(axes, pax)
            acc = op(_expand(axes, acc, u), _expand(pax, pa, u))
            axes = u
        return axes, acc
    if isinstance(f, (Implies, Iff)):
        lax, la = _walk(ops, f.left)
        rax, ra = _walk(ops, f.right)
        u = _union(lax, rax)
        op = ops.implies if isinstance(f, Implies) else ops.iff
        return u, op(_expand(lax, la, u), _expand(rax, ra, u))
    if isinstance(f, (Exists, Forall)):
        axes, a = _walk(ops, f.body)
        existential = isinstance(f, Exists)
        reduce = ops.exists if existential else ops.forall
        bound = [v for v in f.vars if v in axes]
        if len(bound) < len(f.vars):
            a = ops.vacuous(a, existential)
        if bound:
            a = reduce(a, tuple(axes.index(v) for v in bound))
            axes = tuple(x for x in axes if x not in bound)
        return axes, a
    if isinstance(f, Const):
        return (), ops.const(f.value)
    raise TypeError(f"not a formula: {f!r}")


def eval_array(s: Structure, f: Formula, order: Axes) -> np.ndarray:
    """Values of ``f`` under every assignment to ``order`` (axes in that order)."""
    missing = f.free_vars() - set(order)
    if missing:
        raise ContractError(f"free variables {sorted(missing)} of {f} are not bound")
    axes, a = _walk(_Kleene(s), f)
    a = _expand(axes, a, order)
    shape = (len(s.universe),) * len(order)
    if a.shape != shape:
        a = np.broadcast_to(a, shape)
    return a.astype(DTYPE)


def eval(s: Structure, f: Formula, asg: Mapping[str, str] | None = None) -> LogicValue:
    """Kleene value of ``f`` in ``s`` with free variables bound by ``asg``."""
    asg = dict(asg or {})
    order = tuple(sorted(f.free_vars()))
    missing = set(order) - set(asg)
    if missing:
        raise ContractError(f"unbound free variables {sorted(missing)} in {f}")
    a = eval_array(s, f, order)
    return LogicValue(int(a[tuple(s.index(asg[v]) for v in order)]))


def _dirty_walk(s: Structure, f: Formula, written: Mapping[str, np.ndarray]):
    """``(axes, value, dirty)``: dirty where the value may differ from the pre-state.

    An unwritten conjunct that is 0 (an unwritten disjunct or witness that is
    1) fixes the result, so the other parts cannot make it dirty.
    """
    if isinstance(f, Atom):
        val = s.values[f.pred]
        w = written.get(f.pred)
        if w is None:
            w = np.zeros(val.shape, dtype=bool)
        axes, val = _atom_axes(f.args, val)
        if len(f.args) == 2 and f.args[0] == f.args[1]:
            w = np.diagonal(w)
        return axes, val, w
    if isinstance(f, Const):
        return (), np.asarray(f.value.value, dtype=DTYPE), np.asarray(False)
    if isinstance(f, Not):
        axes, v, d = _dirty_walk(s, f.body, written)
        return axes, TRUE - v, d
    if isinstance(f, Implies):
        return _dirty_walk(s, Or((Not(f.left), f.right)), written)
    if isinstance(f, Iff):
        la, lv, ld = _dirty_walk(s, f.left, written)
        ra, rv, rd = _dirty_walk(s, f.right, written)
        u = _union(la, ra)
        lv, ld, rv, rd = (_expand(la, lv, u), _expand(la, ld, u), _expand(ra, rv, u), _expand(ra, rd, u))
        val = np.minimum(np.maximum(TRUE - lv, rv), np.maximum(TRUE - rv, lv))
        return u, val, ld | rd
    if isinstance(f, (And, Or)):
        fixing = FALSE if isinstance(f, And) else TRUE
        op = np.minimum if isinstance(f, And) else np.maximum
        items = [_dirty_walk(s, p, written) for p in f.parts]
        axes: Axes = ()
        for ax, _, _ in items:
            axes = _union(axes, ax)
        val = None
        dirty = np.asarray(False)
        fixed = np.asarray(False)
        for ax, v, d in items:
            v, d = _expand(ax, v, axes), _expand(ax, d, axes)
            val = v if val is None else op(val, v)
            dirty = dirty | d
            fixed = fixed | ((v == fixing) & ~d)
        return axes, val, dirty & ~fixed
    if isinstance(f, (Exists, Forall)):
        axes, v, d = _dirty_walk(s, f.body, written)
        d = np.broadcast_to(d, v.shape) if d.shape != v.shape else d
        existential = isinstance(f, Exists)
        bound = [x for x in f.vars if x in axes]
        if len(bound) < len(f.vars) and not len(s.universe):
            v = np.full(v.shape, FALSE if existential else TRUE, dtype=DTYPE)
        if bound:
            red = tuple(axes.index(x) for x in bound)
            witness = TRUE if existential else FALSE
            vb = np.broadcast_to(v, np.broadcast_shapes(v.shape, d.shape))
            fixed = ((vb == witness) & ~d).any(axis=red)
            dirty = d.any(axis=red) & ~fixed
            v = vb.max(axis=red, initial=FALSE) if existential else vb.min(axis=red, initial=TRUE)
            axes = tuple(x for x in axes if x not in bound)
            return axes, v, dirty
        return axes, v, d
    raise TypeError(f"not a formula: {f!r}")


def footprint_array(s: Structure, f: Formula, order: Axes,
                    written: Mapping[str, np.ndarray]) -> np.ndarray:
    """True where the value of ``f`` may differ from its value before the writes in ``written``."""
    axes, _, d = _dirty_walk(s, f, written)
    d = _expand(axes, d, order)
    return np.broadcast_to(d, (len(s.universe),) * len(order))


def recompute_instrumentation(s: Structure) -> Structure:
    """Set every instrumentation predicate to the value of its definition, in declaration order."""
    vals = dict(s.values)
    cur = s
    for d in s.vocab.instrumentation:
        vals[d.name] = eval_array(cur, d.definition, d.params)
        cur = Structure(s.vocab, s.universe, vals)
    return cur


def _quantifier_free(f: Formula) -> bool:
    if isinstance(f, (Exists, Forall)):
        return False
    if isinstance(f, Not):
        return _quantifier_free(f.body)
    if isinstance(f, (And, Or)):
        return all(_quantifier_free(p) for p in f.parts)
    if isinstance(f, (Implies, Iff)):
        return _quantifier_free(f.left) and _quantifier_free(f.right)
    return True


def _fresh_extension(s: Structure, d, fresh: int) -> np.ndarray | None:
    """Witnesses involving individual ``fresh`` for an existential definition, else None."""
    f = d.definition
    if _quantifier_free(f):
        return np.zeros((len(s.universe),) * d.arity, dtype=DTYPE)
    if not (isinstance(f, Exists) and _quantifier_free(f.body)):
        return None
    bound = tuple(v for v in f.vars if v not in d.params)
    arr = eval_array(s, f.body, tuple(d.params) + bound)
    k = len(d.params)
    hit = np.zeros(arr.shape, dtype=bool)
    for ax in range(k, arr.ndim):
        ix = [slice(None)] * arr.ndim
        ix[ax] = fresh
        hit[tuple(ix)] = True
    masked = np.where(hit, arr, FALSE)
    return masked.max(axis=tuple(range(k, arr.ndim)), initial=FALSE).astype(DTYPE)


def refresh_instrumentation(s: Structure, written: dict[str, np.ndarray],
                            fresh: int | None = None) -> Structure:
    """Recompute instrumentation only where its definition reads a written tuple.

    ``written`` marks core tuples whose value may have changed; it is
    extended in place with the instrumentation tuples that may have changed.
    Tuples outside the footprint keep their previous (sound) values, which
    avoids the precision loss of blanket recomputation on abstract structures.

    ``fresh`` is the index of an individual just added to the universe.  Its
    own tuples are computed exactly; for older tuples an existential
    definition can only gain witnesses that involve it, so the old value is
    combined with those.  Other quantified definitions are recomputed.
    """
    vals = dict(s.values)
    cur = s
    for d in s.vocab.instrumentation:
        dirty = np.array(footprint_array(cur, d.definition, d.params, written))
        old = vals[d.name]
        base = old
        if fresh is not None and d.arity:
            for ax in range(d.arity):
                ix = [slice(None)] * d.arity
                ix[ax] = fresh
                dirty[tuple(ix)] = True
            ext = _fresh_extension(cur, d, fresh)
            if ext is None:
                dirty[...] = True
            else:
                base = np.maximum(old, ext).astype(DTYPE)
        elif fresh is not None:
            ext = _fresh_extension(cur, d, fresh)
            if ext is None:
                dirty = np.ones((), dtype=bool)
            else:
                base = np.maximum(old, ext).astype(DTYPE)
        if not dirty.any() and base is old:
            continue
        new = np.where(dirty, eval_array(cur, d.definition, d.params), base).astype(DTYPE)
        written[d.name] = (dirty | (base != old)) & ((new != old) | (new == HALF))
        vals[d.name] = new
        cur = Structure(s.vocab, s.universe, vals)
    return cur
