"""First-order formulas with equality, and a small text syntax for them.

Syntax (loosest binding first)::

    f <-> g        f -> g        f | g        f & g        !f
    exists u, w. f                forall v. f
    p(v, w)   p()   v == w   v != w   eq(v, w)   0   1   1/2

Predicate names may carry a bracketed suffix such as ``has[a]`` or
``pif[line4,has[a]]``.  Quantifier bodies extend as far right as possible.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .logic import LogicValue


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, pos: int, text: str):
        self.pos = pos
        self.text = text
        super().__init__(f"{message} at offset {pos} in {text!r}")


class Formula:
    __slots__ = ()

    def free_vars(self) -> frozenset[str]:
        raise NotImplementedError

    def atoms(self) -> Iterator["Atom"]:
        raise NotImplementedError

    def __str__(self) -> str:
        return render(self)

    # connective sugar
    def __and__(self, other: "Formula") -> "Formula":
        return And((self, other))

    def __or__(self, other: "Formula") -> "Formula":
        return Or((self, other))

    def __invert__(self) -> "Formula":
        return Not(self)


@dataclass(frozen=True, slots=True)
class Const(Formula):
    value: LogicValue

    def free_vars(self):
        return frozenset()

    def atoms(self):
        return iter(())


@dataclass(frozen=True, slots=True)
class Atom(Formula):
    pred: str
    args: tuple[str, ...]

    def free_vars(self):
        return frozenset(self.args)

    def atoms(self):
        yield self


@dataclass(frozen=True, slots=True)
class Not(Formula):
    body: Formula

    def free_vars(self):
        return self.body.free_vars()

    def atoms(self):
        return self.body.atoms()


@dataclass(frozen=True, slots=True)
class And(Formula):
    parts: tuple[Formula, ...]

    def free_vars(self):
        return frozenset().union(*(p.free_vars() for p in self.parts))

    def atoms(self):
        for p in self.parts:
            yield from p.atoms()


@dataclass(frozen=True, slots=True)
class Or(Formula):
    parts: tuple[Formula, ...]

    def free_vars(self):
        return frozenset().union(*(p.free_vars() for p in self.parts))

    def atoms(self):
        for p in self.parts:
            yield from p.atoms()


@dataclass(frozen=True, slots=True)
class Implies(Formula):
    left: Formula
    right: Formula

    def free_vars(self):
        return self.left.free_vars() | self.right.free_vars()

    def atoms(self):
        yield from self.left.atoms()
        yield from self.right.atoms()


@dataclass(frozen=True, slots=True)
class Iff(Formula):
    left: Formula
    right: Formula

    def free_vars(self):
        return self.left.free_vars() | self.right.free_vars()

    def atoms(self):
        yield from self.left.atoms()
        yield from self.right.atoms()


@dataclass(frozen=True, slots=True)
class Exists(Formula):
    vars: tuple[str, ...]
    body: Formula

    def free_vars(self):
        return self.body.free_vars() - set(self.vars)

    def atoms(self):
        return self.body.atoms()


@dataclass(frozen=True, slots=True)
class Forall(Formula):
    vars: tuple[str, ...]
    body: Formula

    def free_vars(self):
        return self.body.free_vars() - set(self.vars)

    def atoms(self):
        return self.body.atoms()


TRUE = Const(LogicValue.TRUE)
FALSE = Const(LogicValue.FALSE)


def atom(pred: str, *args: str) -> Atom:
    return Atom(pred, tuple(args))


def eq(a: str, b: str) -> Atom:
    return Atom("eq", (a, b))


def conj(*parts: Formula) -> Formula:
    if not parts:
        return TRUE
    return parts[0] if len(parts) == 1 else And(tuple(parts))


def disj(*parts: Formula) -> Formula:
    if not parts:
        return FALSE
    return parts[0] if len(parts) == 1 else Or(tuple(parts))


def substitute(f: Formula, mapping: dict[str, str]) -> Formula:
    """Rename free variables; bound variables shadow the mapping."""
    if isinstance(f, Const):
        return f
    if isinstance(f, Atom):
        return Atom(f.pred, tuple(mapping.get(a, a) for a in f.args))
    if isinstance(f, Not):
        return Not(substitute(f.body, mapping))
    if isinstance(f, And):
        return And(tuple(substitute(p, mapping) for p in f.parts))
    if isinstance(f, Or):
        return Or(tuple(substitute(p, mapping) for p in f.parts))
    if isinstance(f, Implies):
        return Implies(substitute(f.left, mapping), substitute(f.right, mapping))
    if isinstance(f, Iff):
        return Iff(substitute(f.left, mapping), substitute(f.right, mapping))
    if isinstance(f, (Exists, Forall)):
        inner = {k: v for k, v in mapping.items() if k not in f.vars}
        clash = set(f.vars) & set(inner.values())
        if clash:
            raise ValueError(f"substitution would capture {sorted(clash)} in {f}")
        return type(f)(f.vars, substitute(f.body, inner))
    raise TypeError(f)


# ---------------------------------------------------------------- rendering

_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4}


def render(f: Formula, parent: int = 0) -> str:
    if isinstance(f, Const):
        return str(f.value)
    if isinstance(f, Atom):
        return f"{f.pred}({', '.join(f.args)})"
    if isinstance(f, Not):
        return "!" + render(f.body, 5)
    if isinstance(f, (Exists, Forall)):
        word = "exists" if isinstance(f, Exists) else "forall"
        text = f"{word} {', '.join(f.vars)}. {render(f.body, 0)}"
        return f"({text})" if parent else text
    prec = _PREC[type(f)]
    if isinstance(f, (And, Or)):
        op = " & " if isinstance(f, And) else " | "
        text = op.join(render(p, prec + 1) for p in f.parts)
    elif isinstance(f, Implies):
        text = f"{render(f.left, prec + 1)} -> {render(f.right, prec)}"
    else:
        text = f"{render(f.left, prec + 1)} <-> {render(f.right, prec + 1)}"
    return f"({text})" if parent > prec else text


# ------------------------------------------------------------------ parsing

_PUNCT = ("<->", "->", "==", "!=", "1/2", "&", "|", "!", "(", ")", ",", ".")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        for p in _PUNCT:
            if text.startswith(p, i):
                tokens.append(("op", p, i))
                i += len(p)
                break
        else:
            if c in "01" and not (i + 1 < n and (text[i + 1].isalnum() or text[i + 1] == "_")):
                tokens.append(("const", c, i))
                i += 1
            elif c.isalpha() or c == "_":
                start = i
                while i < n and (text[i].isalnum() or text[i] in "_'"):
                    i += 1
                if i < n and text[i] == "[":
                    depth = 0
                    while i < n:
                        if text[i] == "[":
                            depth += 1
                        elif text[i] == "]":
                            depth -= 1
                            if depth == 0:
                                i += 1
                                break
                        i += 1
                    if depth:
                        raise FormulaSyntaxError("unbalanced '['", start, text)
                tokens.append(("name", text[start:i], start))
            else:
                raise FormulaSyntaxError(f"unexpected character {c!r}", i, text)
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, value: str | None = None, kind: str | None = None):
        tok = self.tokens[self.i]
        if (value is not None and tok[1] != value) or (kind is not None and tok[0] != kind):
            want = value or kind
            raise FormulaSyntaxError(f"expected {want!r}, found {tok[1] or 'end'!r}", tok[2], self.text)
        self.i += 1
        return tok

    def accept(self, value: str) -> bool:
        if self.tokens[self.i][0] == "op" and self.tokens[self.i][1] == value:
            self.i += 1
            return True
        return False

    def parse(self) -> Formula:
        f = self.iff()
        self.take(kind="end")
        return f

    def iff(self):
        f = self.implies()
        while self.accept("<->"):
            f = Iff(f, self.implies())
        return f

    def implies(self):
        f = self.disj()
        if self.accept("->"):
            return Implies(f, self.implies())
        return f

    def disj(self):
        parts = [self.conj()]
        while self.accept("|"):
            parts.append(self.conj())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def conj(self):
        parts = [self.unary()]
        while self.accept("&"):
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def unary(self):
        if self.accept("!"):
            return Not(self.unary())
        kind, value, pos = self.peek()
        if kind == "name" and value in ("exists", "forall"):
            self.i += 1
            names = [self.take(kind="name")[1]]
            while self.accept(","):
                names.append(self.take(kind="name")[1])
            self.take(".")
            body = self.iff()
            cls = Exists if value == "exists" else Forall
            return cls(tuple(names), body)
        return self.primary()

    def primary(self):
        kind, value, pos = self.peek()
        if self.accept("("):
            f = self.iff()
            self.take(")")
            return f
        if kind == "const" or (kind == "op" and value == "1/2"):
            self.i += 1
            return Const(LogicValue.of(value))
        if kind != "name":
            raise FormulaSyntaxError(f"unexpected {value or 'end'!r}", pos, self.text)
        self.i += 1
        if self.accept("("):
            args = []
            if not self.accept(")"):
                args.append(self.take(kind="name")[1])
                while self.accept(","):
                    args.append(self.take(kind="name")[1])
                self.take(")")
            return Atom(value, tuple(args))
        if self.accept("=="):
            return Atom("eq", (value, self.take(kind="name")[1]))
        if self.accept("!="):
            return Not(Atom("eq", (value, self.take(kind="name")[1])))
        raise FormulaSyntaxError(f"expected '(' or '==' after {value!r}", pos, self.text)


def parse_formula(text: str) -> Formula:
    return _Parser(text).parse()
