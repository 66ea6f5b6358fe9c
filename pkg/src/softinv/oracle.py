"""Bounded concrete exploration, the thread-type census, and the soundness check.

The oracle runs the same actions on two-valued structures.  Instrumentation
is recomputed exactly after every step, so nothing here depends on focus,
coerce or abstraction; that makes it an independent reference for the
abstract analysis.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .abstraction import (abstraction_map, canonical_abstract, embeds, signature, structure_key,
                          valuation_matrix)
from .evaluation import eval, eval_array, recompute_instrumentation
from .explorer import ResourceError, StateSpace
from .logic import TRUE, LogicValue
from .modelspec import ModelSpec
from .structure import ContractError, Structure
from .transformer import THREAD, execute

DEFAULT_STATE_CAP = 10_000_000

CENSUS_PREDICATES = ("at[idle]", "at[line3]", "at[line4]", "at[line5]", "at[line6]",
                     "has[a]", "has[b]", "succ")
CENSUS_HEADER = ("idle", "line3", "line4", "line5", "line6", "has[a]", "has[b]", "succ")


@dataclass(frozen=True)
class BoundSpec:
    threads: int
    nodes: int

    def __post_init__(self):
        if self.threads < 1 or self.nodes < 1:
            raise ContractError("bounds must be positive")

    def __str__(self):
        return f"{self.threads}x{self.nodes}"


@dataclass
class ConcreteSpace:
    model: ModelSpec
    bound: BoundSpec
    states: list[Structure]
    violations: list[Structure] = field(default_factory=list)
    transitions: int = 0

    @property
    def verified(self) -> bool:
        return not self.violations


def _consistent(s: Structure, constraints) -> bool:
    for c in constraints:
        body = eval_array(s, c.body, c.vars)
        head = eval_array(s, c.head, c.vars)
        if ((body == TRUE) & (head != TRUE)).any():
            return False
    return True


def concrete_successors(m: ModelSpec, s: Structure, b: BoundSpec) -> list[tuple[str, Structure]]:
    """Every (action name, successor) for one concrete state."""
    out = []
    for act in m.actions:
        if act.allocates is not None:
            kind = act.allocates[0]
            if int((s.values[kind] == TRUE).sum()) >= b.nodes:
                continue
        for t, v in zip(s.universe, s.values[act.source]):
            if v != TRUE:
                continue
            if act.guard is not None:
                if eval(s, act.guard, {THREAD: t}) is not LogicValue.TRUE:
                    continue
            post = recompute_instrumentation(execute(s, act, t))
            out.append((act.name, post))
    return out


def explore_concrete(m: ModelSpec, b: BoundSpec, state_cap: int = DEFAULT_STATE_CAP) -> ConcreteSpace:
    """All reachable concrete states at bound ``b``, up to isomorphism."""
    init = recompute_instrumentation(m.concrete_initial(b.threads, b.nodes))
    cons = m.constraints
    seen = {structure_key(init): init}
    work = deque([init])
    sp = ConcreteSpace(m, b, [])
    while work:
        s = work.popleft()
        for _, post in concrete_successors(m, s, b):
            sp.transitions += 1
            k = structure_key(post)
            if k in seen:
                continue
            if len(seen) >= state_cap:
                raise ResourceError(f"more than {state_cap} concrete states at bound {b}")
            seen[k] = post
            work.append(post)
    sp.states = list(seen.values())
    for s in sp.states:
        if not _consistent(s, cons):
            raise ContractError("concrete exploration produced a state violating an integrity constraint")
        if eval(s, m.property) is not LogicValue.TRUE:
            sp.violations.append(s)
    return sp


# --------------------------------------------------------------- census

def census(states: Iterable[Structure], preds: Sequence[str] = CENSUS_PREDICATES,
           kind: str = "is[thread]") -> list[tuple[int, ...]]:
    """Distinct valuation rows of individuals satisfying ``kind``, sorted descending as bit strings."""
    rows = set()
    for s in states:
        if not s.is_concrete():
            raise ContractError("census needs concrete structures")
        mask = s.values[kind] == TRUE
        vecs = valuation_matrix(s, preds)[mask]
        for r in vecs:
            rows.add(tuple(int(x == TRUE) for x in r))
    return sorted(rows, reverse=True)


def census_record(rows: Sequence[tuple[int, ...]], header: Sequence[str] = CENSUS_HEADER) -> dict:
    return {"columns": list(header), "rows": ["".join(map(str, r)) for r in rows]}


def format_census(rows: Sequence[tuple[int, ...]], header: Sequence[str] = CENSUS_HEADER) -> str:
    width = [max(len(h), 1) for h in header]
    lines = ["  ".join(h.rjust(w) for h, w in zip(header, width))]
    for r in rows:
        lines.append("  ".join(str(v).rjust(w) for v, w in zip(r, width)))
    return "\n".join(lines)


# ------------------------------------------------------------ soundness

@dataclass
class SoundnessReport:
    checked: int = 0
    covered: int = 0
    uncovered: list[Structure] = field(default_factory=list)

    @property
    def full(self) -> bool:
        return self.covered == self.checked


def _embedding(ca: Structure, target: Structure, A: Sequence[str]) -> dict[str, str] | None:
    """A surjection under which ``ca`` embeds into ``target``, if there is one."""
    if signature(ca, A) == signature(target, A):
        m1 = abstraction_map(ca, A)
        back = {v: u for u, v in abstraction_map(target, A).items()}
        f = {u: back[m1[u]] for u in ca.universe}
        if embeds(ca, target, f):
            return f
    n, k = len(ca.universe), len(target.universe)
    if n < k:
        return None
    tv = valuation_matrix(target, A)
    sv = valuation_matrix(ca, A)
    # each source individual may only go to a target with a compatible valuation
    options = []
    for i in range(n):
        ok = [j for j in range(k) if ((sv[i] == tv[j]) | (tv[j] == 1)).all()]
        if not ok:
            return None
        options.append(ok)
    for choice in itertools.product(*options):
        if len(set(choice)) != k:
            continue
        f = {ca.universe[i]: target.universe[j] for i, j in enumerate(choice)}
        if embeds(ca, target, f):
            return f
    return None


def check_soundness(space: StateSpace, concrete: Iterable[Structure],
                    A: Sequence[str] | None = None) -> SoundnessReport:
    """Whether every concrete state's canonical abstraction embeds into some stored abstract state."""
    A = tuple(A if A is not None else space.model.abstraction_set)
    stored = space.structures()
    rep = SoundnessReport()
    for c in concrete:
        rep.checked += 1
        ca = canonical_abstract(c, A)
        if any(_embedding(ca, s, A) is not None for s in stored):
            rep.covered += 1
        else:
            rep.uncovered.append(c)
    return rep
