"""Abstract state-space exploration with partial join.

The store keeps one canonically abstract structure per universe signature
(the set of abstraction-valuation vectors).  A new successor either opens a
fresh slot or is joined into the existing one; a slot whose structure grew
is put back on the worklist.  Because each slot can only move up the finite
information order, the fixpoint is reached after finitely many steps.
"""
from __future__ import annotations

import io
import struct
import time
from collections import deque
from dataclasses import dataclass, field
from typing import BinaryIO, Iterable

import numpy as np

from .abstraction import (canonical_abstract, canonical_key, partial_join, short_key, signature,
                          valuation_matrix)
from .evaluation import eval
from .logic import LogicValue
from .modelspec import ModelSpec
from .structure import ContractError, Structure
from .transformer import apply_action, enabled_threads


class ResourceError(RuntimeError):
    """Raised when exploration exceeds its state cap."""


@dataclass
class Violation:
    signature: tuple[str, ...]
    value: LogicValue
    key: str
    action: str | None
    parent: tuple[str, ...] | None


@dataclass
class Stats:
    ca_states: int = 0
    stored_states: int = 0
    steps: int = 0
    joins: int = 0
    elapsed: float = 0.0


@dataclass
class StateSpace:
    model: ModelSpec
    states: dict[tuple[str, ...], Structure] = field(default_factory=dict)
    parents: dict[tuple[str, ...], tuple[tuple[str, ...] | None, str | None]] = field(default_factory=dict)
    violations: list[Violation] = field(default_factory=list)
    stats: Stats = field(default_factory=Stats)

    @property
    def verified(self) -> bool:
        return not self.violations

    def structures(self) -> list[Structure]:
        """The stored structures, ordered by signature."""
        return [self.states[k] for k in sorted(self.states)]

    def key_of(self, s: Structure) -> str:
        return short_key(canonical_key(s, self.model.abstraction_set))

    def find(self, key: str) -> Structure:
        for s in self.structures():
            if self.key_of(s) == key:
                return s
        raise KeyError(f"no stored state with key {key}")

    def _path(self, sig: tuple[str, ...] | None) -> list[tuple[str, tuple[str, ...]]]:
        out = []
        seen = set()
        while sig is not None and sig not in seen:
            seen.add(sig)
            parent, act = self.parents[sig]
            out.append((act or "init", sig))
            sig = parent
        return out[::-1]

    def trace(self, violation: int | Violation = 0) -> list[tuple[str, str]]:
        """Actions from an initial state to a violation, as (action, signature text) pairs."""
        v = self.violations[violation] if isinstance(violation, int) else violation
        steps = self._path(v.parent) if v.parent is not None else []
        steps.append((v.action or "init", v.signature))
        return [(a, " ".join(sig)) for a, sig in steps]


def check_property(m: ModelSpec, s: Structure) -> LogicValue:
    return eval(s, m.property)


def explore(m: ModelSpec, state_cap: int | None = None,
            initial: Iterable[Structure] | None = None) -> StateSpace:
    """Fixpoint of the abstract transformers from the model's initial structures.

    The property is checked on every structure as it is stored or joined, so
    a violation is attributed to the step that first produced it.
    """
    A = m.abstraction_set
    cons = m.constraints
    sp = StateSpace(m)
    t0 = time.perf_counter()
    work: deque[tuple[str, ...]] = deque()
    queued: set[tuple[str, ...]] = set()
    seen_ca: set[bytes] = set()
    flagged: set[tuple[str, ...]] = set()

    def add(s: Structure, parent, act):
        ca = canonical_abstract(s, A)
        key = canonical_key(ca, A)
        if key in seen_ca:
            return
        seen_ca.add(key)
        sp.stats.stored_states += 1
        sig = signature(ca, A)
        old = sp.states.get(sig)
        if old is None:
            if state_cap is not None and len(sp.states) >= state_cap:
                raise ResourceError(f"more than {state_cap} abstract states")
            new = ca
            sp.parents[sig] = (parent, act)
        else:
            new = partial_join(old, ca, A)
            sp.stats.joins += 1
            if canonical_key(new, A) == canonical_key(old, A):
                return
        sp.states[sig] = new
        if sig not in flagged:
            v = check_property(m, new)
            if v is not LogicValue.TRUE:
                flagged.add(sig)
                sp.violations.append(Violation(sig, v, "", act, parent))
        if sig not in queued:
            queued.add(sig)
            work.append(sig)

    for s in (m.initial if initial is None else initial):
        add(s, None, None)
    while work:
        sig = work.popleft()
        queued.discard(sig)
        s = sp.states[sig]
        for act in m.actions:
            for t in enabled_threads(s, act):
                for post in apply_action(s, act, t, cons, A):
                    sp.stats.steps += 1
                    add(post, sig, act.name)
    for v in sp.violations:
        final = sp.states[v.signature]
        v.value = check_property(m, final)
        v.key = sp.key_of(final)
    sp.stats.ca_states = len(sp.states)
    sp.stats.elapsed = time.perf_counter() - t0
    return sp


# ------------------------------------------------------------ persistence

_MAGIC = b"SIVS1"


def save_states(sp: StateSpace, fh: BinaryIO) -> None:
    """Write the stored structures as length-prefixed canonical serializations."""
    A = sp.model.abstraction_set
    fh.write(_MAGIC)
    fh.write(struct.pack("<I", len(sp.states)))
    for s in sp.structures():
        vecs = valuation_matrix(s, A)
        order = np.lexsort(vecs.T[::-1]) if len(s.universe) else []
        names = "\x00".join(s.universe[i] for i in order).encode()
        body = canonical_key(s, A)
        fh.write(struct.pack("<II", len(names), len(body)))
        fh.write(names)
        fh.write(body)


def load_states(m: ModelSpec, fh: BinaryIO) -> list[Structure]:
    """Read structures written by :func:`save_states` for model ``m``."""
    if fh.read(len(_MAGIC)) != _MAGIC:
        raise ContractError("not a saved state file")
    (count,) = struct.unpack("<I", fh.read(4))
    out = []
    for _ in range(count):
        ln, lb = struct.unpack("<II", fh.read(8))
        names = fh.read(ln).decode()
        body = fh.read(lb)
        universe = tuple(names.split("\x00")) if names else ()
        n = int.from_bytes(body[:4], "little")
        if n != len(universe):
            raise ContractError("corrupt state file")
        buf = io.BytesIO(body[4:])
        vals = {}
        for d in m.vocab:
            shape = (n,) * d.arity
            size = n ** d.arity
            vals[d.name] = np.frombuffer(buf.read(size), dtype=np.int8).reshape(shape).copy()
        out.append(Structure(m.vocab, universe, vals))
    return out
