"""Predicate vocabularies and 3-valued logical structures."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .formula import Formula
from .logic import DTYPE, FALSE, HALF, TRUE, LogicValue


class ContractError(ValueError):
    """An operation was called outside its documented preconditions."""


@dataclass(frozen=True)
class PredicateDecl:
    name: str
    arity: int
    kind: str = "core"  # "core" | "instrumentation"
    definition: Formula | None = None
    params: tuple[str, ...] = ()
    abstraction: bool = False
    functional: bool = False
    unique: bool = False

    def __post_init__(self):
        if self.arity not in (0, 1, 2):
            raise ContractError(f"{self.name}: arity must be 0, 1 or 2")
        if self.kind not in ("core", "instrumentation"):
            raise ContractError(f"{self.name}: unknown kind {self.kind!r}")
        if (self.kind == "instrumentation") != (self.definition is not None):
            raise ContractError(f"{self.name}: instrumentation predicates need a definition")
        if self.definition is not None:
            if len(self.params) != self.arity:
                raise ContractError(f"{self.name}: expected {self.arity} parameters")
            extra = self.definition.free_vars() - set(self.params)
            if extra:
                raise ContractError(f"{self.name}: unbound variables {sorted(extra)} in definition")
        if self.abstraction and self.arity != 1:
            raise ContractError(f"{self.name}: only unary predicates can be abstraction predicates")
        if self.functional and self.arity != 2:
            raise ContractError(f"{self.name}: only binary predicates can be functional")
        if self.unique and self.arity != 1:
            raise ContractError(f"{self.name}: only unary predicates can be unique")

    @property
    def instrumentation(self) -> bool:
        return self.kind == "instrumentation"


EQ = PredicateDecl("eq", 2)


class Vocabulary:
    """An ordered, validated set of predicate declarations (``eq`` always first)."""

    def __init__(self, decls: Iterable[PredicateDecl]):
        self._decls: dict[str, PredicateDecl] = {"eq": EQ}
        for d in decls:
            if d.name == "eq":
                continue
            if d.name in self._decls:
                raise ContractError(f"predicate {d.name} declared twice")
            if d.definition is not None:
                for a in d.definition.atoms():
                    dep = self._decls.get(a.pred)
                    if dep is None:
                        if a.pred == d.name:
                            raise ContractError(f"{d.name}: cyclic instrumentation definition")
                        raise ContractError(f"{d.name}: undeclared predicate {a.pred} in definition")
                    if dep.arity != len(a.args):
                        raise ContractError(f"{d.name}: {a.pred} used with {len(a.args)} arguments")
            self._decls[d.name] = d

    def __getitem__(self, name: str) -> PredicateDecl:
        try:
            return self._decls[name]
        except KeyError:
            raise ContractError(f"undeclared predicate {name}") from None

    def __contains__(self, name: str) -> bool:
        return name in self._decls

    def __iter__(self):
        return iter(self._decls.values())

    def __len__(self):
        return len(self._decls)

    def __eq__(self, other):
        return isinstance(other, Vocabulary) and list(self) == list(other)

    def __hash__(self):
        return hash(tuple(self._decls))

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(self._decls)

    def of_arity(self, k: int) -> list[PredicateDecl]:
        return [d for d in self if d.arity == k]

    @property
    def unary(self) -> tuple[str, ...]:
        return tuple(d.name for d in self if d.arity == 1)

    @property
    def instrumentation(self) -> list[PredicateDecl]:
        return [d for d in self if d.instrumentation]

    @property
    def abstraction_set(self) -> tuple[str, ...]:
        return tuple(d.name for d in self if d.abstraction)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=DTYPE, order="C")  # ascontiguousarray would promote 0-d to 1-d
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class Structure:
    """A universe of named individuals and a 3-valued interpretation of every predicate.

    ``values[p]`` is an int8 array of shape ``(n,) * arity(p)`` indexed in
    universe order.  Instances are treated as immutable; use :meth:`replace`
    or :meth:`edit` to derive new ones.
    """

    vocab: Vocabulary
    universe: tuple[str, ...]
    values: Mapping[str, np.ndarray]
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {u: i for i, u in enumerate(self.universe)})
        if len(self._index) != len(self.universe):
            raise ContractError("duplicate individual names")
        n = len(self.universe)
        vals = {}
        for d in self.vocab:
            a = self.values.get(d.name)
            if a is None:
                raise ContractError(f"no interpretation for {d.name}")
            if a.shape != (n,) * d.arity:
                raise ContractError(f"{d.name}: interpretation has shape {a.shape}")
            vals[d.name] = a if not a.flags.writeable and a.dtype == DTYPE else _frozen(a)
        eqa = vals["eq"]
        if n and (eqa[~np.eye(n, dtype=bool)] != FALSE).any():
            raise ContractError("eq must be 0 between distinct individuals")
        if n and (np.diagonal(eqa) == FALSE).any():
            raise ContractError("eq(u, u) must be 1 or 1/2")
        object.__setattr__(self, "values", vals)

    # -- construction -------------------------------------------------
    @classmethod
    def empty(cls, vocab: Vocabulary, universe: Iterable[str] = (),
              summary: Iterable[str] = ()) -> "Structure":
        universe = tuple(universe)
        n = len(universe)
        vals = {d.name: np.zeros((n,) * d.arity, dtype=DTYPE) for d in vocab}
        eqa = np.eye(n, dtype=DTYPE) * TRUE
        idx = {u: i for i, u in enumerate(universe)}
        for u in summary:
            eqa[idx[u], idx[u]] = HALF
        vals["eq"] = eqa
        return cls(vocab, universe, vals)

    def edit(self) -> "StructureBuilder":
        return StructureBuilder(self)

    def replace(self, **values: np.ndarray) -> "Structure":
        vals = dict(self.values)
        vals.update(values)
        return Structure(self.vocab, self.universe, vals)

    # -- queries ------------------------------------------------------
    def index(self, u: str) -> int:
        try:
            return self._index[u]
        except KeyError:
            raise ContractError(f"{u} is not in the universe") from None

    def __len__(self) -> int:
        return len(self.universe)

    def get(self, pred: str, *args: str) -> LogicValue:
        self.vocab[pred]
        return LogicValue(int(self.values[pred][tuple(self.index(a) for a in args)]))

    def is_summary(self, u: str) -> bool:
        i = self.index(u)
        return self.values["eq"][i, i] == HALF

    @property
    def summary_mask(self) -> np.ndarray:
        return np.diagonal(self.values["eq"]) == HALF

    def is_concrete(self) -> bool:
        return all((a != HALF).all() for a in self.values.values())

    def unary_vector(self, u: str, preds: Iterable[str]) -> tuple[int, ...]:
        i = self.index(u)
        return tuple(int(self.values[p][i]) for p in preds)

    def sub(self, keep: Iterable[str]) -> "Structure":
        """Restrict to the given individuals (in the given order)."""
        keep = tuple(keep)
        idx = np.array([self.index(u) for u in keep], dtype=np.intp)
        vals = {}
        for name, a in self.values.items():
            if a.ndim == 0:
                vals[name] = a
            elif a.ndim == 1:
                vals[name] = a[idx]
            else:
                vals[name] = a[np.ix_(idx, idx)]
        return Structure(self.vocab, keep, vals)

    def renamed(self, mapping: Mapping[str, str]) -> "Structure":
        return Structure(self.vocab, tuple(mapping.get(u, u) for u in self.universe), self.values)

    def same_as(self, other: "Structure") -> bool:
        """Identical universe order and interpretation (not up to isomorphism)."""
        return (self.universe == other.universe and self.vocab == other.vocab
                and all(np.array_equal(a, other.values[k]) for k, a in self.values.items()))

    def describe(self) -> str:
        lines = []
        for u in self.universe:
            labels = []
            i = self.index(u)
            for d in self.vocab.of_arity(1):
                v = self.values[d.name][i]
                if v == TRUE:
                    labels.append(d.name)
                elif v == HALF:
                    labels.append(f"{d.name}=1/2")
            star = "*" if self.is_summary(u) else ""
            lines.append(f"{u}{star}: {' '.join(labels)}")
        for d in self.vocab.of_arity(2):
            if d.name == "eq":
                continue
            a = self.values[d.name]
            for i, j in zip(*np.nonzero(a)):
                tag = "" if a[i, j] == TRUE else " =1/2"
                lines.append(f"{d.name}({self.universe[i]},{self.universe[j]}){tag}")
        for d in self.vocab.of_arity(0):
            lines.append(f"{d.name} = {LogicValue(int(self.values[d.name]))}")
        return "\n".join(lines)

    def __repr__(self) -> str:
        return f"Structure({len(self.universe)} individuals: {', '.join(self.universe)})"


class StructureBuilder:
    """Mutable scratch copy of a structure's interpretation."""

    def __init__(self, s: Structure):
        self.vocab = s.vocab
        self.universe = list(s.universe)
        self.values = {k: np.array(v, dtype=DTYPE) for k, v in s.values.items()}
        self._index = {u: i for i, u in enumerate(self.universe)}

    def set(self, pred: str, args: tuple[str, ...] | str, value) -> "StructureBuilder":
        if isinstance(args, str):
            args = (args,)
        self.values[pred][tuple(self._index[a] for a in args)] = LogicValue.of(value).value
        return self

    def set_summary(self, u: str, summary: bool = True) -> "StructureBuilder":
        i = self._index[u]
        self.values["eq"][i, i] = HALF if summary else TRUE
        return self

    def freeze(self) -> Structure:
        return Structure(self.vocab, tuple(self.universe), self.values)
