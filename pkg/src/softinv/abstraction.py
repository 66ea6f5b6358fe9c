"""Embedding, tight embedding, canonical abstraction and canonical keys."""
from __future__ import annotations

import hashlib
import itertools
from typing import Iterable, Mapping

import numpy as np

from .logic import DTYPE, HALF, leq_arrays, join_arrays, value_text
from .structure import ContractError, Structure

_CODE = "0h1"


def _check_abstraction_set(s: Structure, A: Iterable[str]) -> tuple[str, ...]:
    A = tuple(A)
    for p in A:
        if s.vocab[p].arity != 1:
            raise ContractError(f"abstraction predicate {p} is not unary")
    return A


def valuation_matrix(s: Structure, A: Iterable[str]) -> np.ndarray:
    """``(n, |A|)`` array of each individual's values on the abstraction predicates."""
    A = tuple(A)
    if not A:
        return np.zeros((len(s.universe), 0), dtype=DTYPE)
    return np.stack([s.values[p] for p in A], axis=1)


def class_name(vector: Iterable[int]) -> str:
    """Canonical individual name for an abstraction-valuation vector."""
    return "a" + "".join(_CODE[int(v)] for v in vector)


def signature(s: Structure, A: Iterable[str]) -> tuple[str, ...]:
    """Sorted tuple of the individuals' valuation-vector names (the universe shape)."""
    return tuple(sorted(class_name(row) for row in valuation_matrix(s, A)))


def _as_index_map(s1: Structure, s2: Structure, f: Mapping[str, str]) -> np.ndarray:
    if set(f) != set(s1.universe):
        raise ContractError("embedding map must be total on the source universe")
    idx = np.array([s2.index(f[u]) for u in s1.universe], dtype=np.intp)
    if len(set(idx.tolist())) != len(s2.universe):
        raise ContractError("embedding map is not surjective")
    return idx


def embeds(s1: Structure, s2: Structure, f: Mapping[str, str]) -> bool:
    """Whether every value of ``s1`` is below the value of its image under ``f``."""
    if s1.vocab != s2.vocab:
        raise ContractError("structures have different vocabularies")
    idx = _as_index_map(s1, s2, f)
    for name, a in s1.values.items():
        b = s2.values[name]
        if a.ndim == 1:
            b = b[idx]
        elif a.ndim == 2:
            b = b[np.ix_(idx, idx)]
        if not leq_arrays(a, b).all():
            return False
    return True


def _tight(s: Structure, classes: np.ndarray, names: tuple[str, ...]) -> Structure:
    """Tight embedding where individual ``i`` maps to target ``names[classes[i]]``."""
    n = len(s.universe)
    if n == 0:
        return Structure(s.vocab, (), s.values)
    order = np.argsort(classes, kind="stable")
    starts = np.flatnonzero(np.r_[True, np.diff(classes[order]) != 0])
    vals = {}
    for name, a in s.values.items():
        if a.ndim == 0:
            vals[name] = a
            continue
        lo = hi = a
        for ax in range(a.ndim):
            lo = np.minimum.reduceat(np.take(lo, order, axis=ax), starts, axis=ax)
            hi = np.maximum.reduceat(np.take(hi, order, axis=ax), starts, axis=ax)
        vals[name] = np.where(lo == hi, lo, HALF).astype(DTYPE)
    return Structure(s.vocab, names, vals)


def tight_embed(s: Structure, f: Mapping[str, str]) -> Structure:
    """The structure ``s`` tightly embeds into under the surjection ``f``.

    A target tuple is 1 (0) when all its preimage tuples are 1 (0) and 1/2
    otherwise; merged individuals therefore get ``eq(u, u) = 1/2``.  Target
    individuals are ordered by first appearance in ``s.universe``.
    """
    if set(f) != set(s.universe):
        raise ContractError("tight_embed needs a map defined on every individual")
    names = tuple(dict.fromkeys(f[u] for u in s.universe))
    pos = {t: i for i, t in enumerate(names)}
    classes = np.array([pos[f[u]] for u in s.universe], dtype=np.intp)
    return _tight(s, classes, names)


def abstraction_map(s: Structure, A: Iterable[str]) -> dict[str, str]:
    """Each individual's canonical target name (its valuation-vector name)."""
    A = _check_abstraction_set(s, A)
    return {u: class_name(row) for u, row in zip(s.universe, valuation_matrix(s, A))}


def canonical_abstract(s: Structure, A: Iterable[str]) -> Structure:
    """Merge individuals with equal valuations over ``A``; individuals sorted by valuation."""
    A = _check_abstraction_set(s, A)
    if not s.universe:
        return s
    vecs = valuation_matrix(s, A)
    uniq, inverse = np.unique(vecs, axis=0, return_inverse=True)
    names = tuple(class_name(row) for row in uniq)
    return _tight(s, inverse.reshape(-1).astype(np.intp), names)


def is_canonical(s: Structure, A: Iterable[str]) -> bool:
    """Whether ``s`` is (isomorphic to) its own canonical abstraction.

    Tight embedding along a bijection is a renaming, so this holds exactly
    when no two individuals share a valuation vector.
    """
    A = _check_abstraction_set(s, A)
    vecs = valuation_matrix(s, A)
    return len(np.unique(vecs, axis=0)) == len(s.universe) if len(s.universe) else True


def _serialize(s: Structure, order: np.ndarray) -> bytes:
    parts = [len(s.universe).to_bytes(4, "little")]
    for name, a in s.values.items():
        if a.ndim == 1:
            a = a[order]
        elif a.ndim == 2:
            a = a[np.ix_(order, order)]
        parts.append(np.ascontiguousarray(a).tobytes())
    return b"".join(parts)


def canonical_key(s: Structure, A: Iterable[str]) -> bytes:
    """Byte key equal for two canonically abstract structures iff they are isomorphic."""
    A = _check_abstraction_set(s, A)
    if not is_canonical(s, A):
        raise ContractError("canonical_key needs a canonically abstract structure")
    vecs = valuation_matrix(s, A)
    order = np.lexsort(vecs.T[::-1]) if len(s.universe) else np.zeros(0, dtype=np.intp)
    return _serialize(s, order)


def short_key(key: bytes) -> str:
    return hashlib.sha1(key).hexdigest()[:12]


def _refine(s: Structure) -> list[int]:
    """Colour individuals by unary values, then refine by binary adjacency to a fixpoint."""
    n = len(s.universe)
    unary = [a for a in s.values.values() if a.ndim == 1]
    diag = np.diagonal(s.values["eq"])
    raw = [tuple(int(a[i]) for a in unary) + (int(diag[i]),) for i in range(n)]
    binary = [a for name, a in s.values.items() if a.ndim == 2 and name != "eq"]

    def rank(sigs):
        table = {sig: r for r, sig in enumerate(sorted(set(sigs)))}
        return [table[sig] for sig in sigs]

    colors = rank(raw)
    while True:
        sigs = []
        for i in range(n):
            parts = [colors[i]]
            for a in binary:
                out = tuple(sorted((colors[j], int(a[i, j])) for j in np.flatnonzero(a[i])))
                inc = tuple(sorted((colors[j], int(a[j, i])) for j in np.flatnonzero(a[:, i])))
                parts.append((out, inc))
            sigs.append(tuple(parts))
        new = rank(sigs)
        if len(set(new)) == len(set(colors)):
            return new
        colors = new


def structure_key(s: Structure, limit: int = 40320) -> bytes:
    """Isomorphism-invariant key for an arbitrary structure.

    Individuals are ordered by refined colour; remaining ties are broken by
    the lexicographically least serialization over all orders of the tied
    blocks (at most ``limit`` candidates).
    """
    n = len(s.universe)
    if n == 0:
        return _serialize(s, np.zeros(0, dtype=np.intp))
    colors = _refine(s)
    blocks: dict[int, list[int]] = {}
    for i, c in enumerate(colors):
        blocks.setdefault(c, []).append(i)
    groups = [blocks[c] for c in sorted(blocks)]
    total = 1
    for g in groups:
        for k in range(2, len(g) + 1):
            total *= k
    if total > limit:
        raise ContractError(f"too many symmetric orderings ({total}) for exhaustive tie-breaking")
    best = None
    for combo in itertools.product(*(itertools.permutations(g) for g in groups)):
        order = np.fromiter(itertools.chain.from_iterable(combo), dtype=np.intp, count=n)
        key = _serialize(s, order)
        if best is None or key < best:
            best = key
    return best


def partial_join(s1: Structure, s2: Structure, A: Iterable[str]) -> Structure | None:
    """Pointwise information join of two structures with the same universe shape.

    Both inputs must be canonically abstract.  Returns ``None`` when their
    valuation-vector sets differ (the states are kept apart).
    """
    A = _check_abstraction_set(s1, A)
    if not (is_canonical(s1, A) and is_canonical(s2, A)):
        raise ContractError("partial_join needs canonically abstract structures")
    m1 = abstraction_map(s1, A)
    m2 = abstraction_map(s2, A)
    if sorted(m1.values()) != sorted(m2.values()):
        return None
    back = {v: u for u, v in m2.items()}
    idx = np.array([s2.index(back[m1[u]]) for u in s1.universe], dtype=np.intp)
    vals = {}
    for name, a in s1.values.items():
        b = s2.values[name]
        if a.ndim == 1:
            b = b[idx]
        elif a.ndim == 2:
            b = b[np.ix_(idx, idx)]
        vals[name] = join_arrays(a, b)
    return Structure(s1.vocab, s1.universe, vals)


def canonical_names(s: Structure, A: Iterable[str]) -> Structure:
    """Rename a canonically abstract structure's individuals to their class names, sorted."""
    A = _check_abstraction_set(s, A)
    vecs = valuation_matrix(s, A)
    order = np.lexsort(vecs.T[::-1]) if len(s.universe) else []
    sub = s.sub([s.universe[i] for i in order])
    return sub.renamed({u: class_name(vecs[i]) for i, u in zip(order, sub.universe)})


def format_vector(vector: Iterable[int]) -> str:
    return " ".join(value_text(v) for v in vector)
