"""Temporal formulas: AST, text grammar, JSON form and orbit-level evaluation.

Grammar (whitespace-insensitive)::

    formula  := disj
    disj     := conj ('|' conj)*
    conj     := unary ('&' unary)*
    unary    := '!' unary | quant | '(' formula ')' | atom
    quant    := ('E' | 'A') ident '.' formula        # scopes maximally right
    atom     := ident cmp ident | ident '(' ident (',' ident)* ')'
    cmp      := '<' | '<=' | '=' | '!=' | '>' | '>='

``>`` and ``>=`` are normalized to ``<`` and ``<=`` with swapped operands.
The ``name(args)`` form is a relation atom resolved against a language.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Sequence, Union

from .orders import WeakOrder, enumerate_weak_orders

COMPARATORS = ("<", "<=", "=", "!=")


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, position: int, text: str = ""):
        super().__init__(f"{message} at position {position}")
        self.position = position
        self.text = text


class UnboundVariable(KeyError):
    pass


@dataclass(frozen=True)
class Atom:
    lhs: str
    op: str
    rhs: str

    def __post_init__(self):
        if self.op not in COMPARATORS:
            raise ValueError(f"unknown comparator {self.op!r}")


@dataclass(frozen=True)
class RelAtom:
    name: str
    args: tuple[str, ...]


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class And:
    args: tuple["Formula", ...]


@dataclass(frozen=True)
class Or:
    args: tuple["Formula", ...]


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


Formula = Union[Atom, RelAtom, Not, And, Or, Exists, Forall]

QF, PP, FAE, GENERAL = "quantifier-free", "pp", "forall-exists-and", "general"


# -- tokenizer / parser -------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(<=|>=|!=|[<>=!&|().,])|([A-Za-z_][A-Za-z0-9_']*))")


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise FormulaSyntaxError(f"unexpected character {text[start]!r}", start, text)
        tok = m.group(1) or m.group(2)
        tokens.append((tok, m.start(1) if m.group(1) else m.start(2)))
        pos = m.end()
    tokens.append(("<eof>", len(text)))
    return tokens


def _is_ident(tok: str) -> bool:
    return re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", tok) is not None


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self, k: int = 0) -> str:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)][0]

    def pos(self) -> int:
        return self.tokens[self.i][1]

    def take(self, expected: str | None = None) -> str:
        tok = self.peek()
        if expected is not None and tok != expected:
            raise FormulaSyntaxError(f"expected {expected!r}, found {tok!r}", self.pos(), self.text)
        self.i += 1
        return tok

    def ident(self) -> str:
        tok = self.peek()
        if not _is_ident(tok):
            raise FormulaSyntaxError(f"expected variable, found {tok!r}", self.pos(), self.text)
        self.i += 1
        return tok

    def parse(self) -> Formula:
        f = self.disj()
        if self.peek() != "<eof>":
            raise FormulaSyntaxError(f"unexpected {self.peek()!r}", self.pos(), self.text)
        return f

    def disj(self) -> Formula:
        parts = [self.conj()]
        while self.peek() == "|":
            self.take()
            parts.append(self.conj())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def conj(self) -> Formula:
        parts = [self.unary()]
        while self.peek() == "&":
            self.take()
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def unary(self) -> Formula:
        tok = self.peek()
        if tok == "!":
            self.take()
            return Not(self.unary())
        if tok in ("E", "A") and _is_ident(self.peek(1)) and self.peek(2) == ".":
            self.take()
            var = self.ident()
            self.take(".")
            body = self.disj()
            return Exists(var, body) if tok == "E" else Forall(var, body)
        if tok == "(":
            self.take()
            f = self.disj()
            self.take(")")
            return f
        return self.atom()

    def atom(self) -> Formula:
        lhs = self.ident()
        op = self.peek()
        if op == "(":
            self.take()
            args = [self.ident()]
            while self.peek() == ",":
                self.take()
                args.append(self.ident())
            self.take(")")
            return RelAtom(lhs, tuple(args))
        if op not in ("<", "<=", "=", "!=", ">", ">="):
            raise FormulaSyntaxError(f"expected comparator, found {op!r}", self.pos(), self.text)
        self.take()
        rhs = self.ident()
        if op == ">":
            return Atom(rhs, "<", lhs)
        if op == ">=":
            return Atom(rhs, "<=", lhs)
        return Atom(lhs, op, rhs)


def parse(text: str) -> Formula:
    return _Parser(text).parse()


# -- printing -----------------------------------------------------------------

def to_text(f: Formula) -> str:
    if isinstance(f, Atom):
        return f"{f.lhs}{f.op}{f.rhs}"
    if isinstance(f, RelAtom):
        return f"{f.name}({','.join(f.args)})"
    if isinstance(f, Not):
        inner = to_text(f.arg)
        return "!" + (inner if isinstance(f.arg, (Atom, RelAtom, Not)) else f"({inner})")
    if isinstance(f, And):
        return " & ".join(_wrap(a, (And, Or, Exists, Forall)) for a in f.args)
    if isinstance(f, Or):
        return " | ".join(_wrap(a, (Or, Exists, Forall)) for a in f.args)
    if isinstance(f, (Exists, Forall)):
        q = "E" if isinstance(f, Exists) else "A"
        return f"{q} {f.var}. {to_text(f.body)}"
    raise TypeError(f"not a formula: {f!r}")


def _wrap(f: Formula, kinds) -> str:
    s = to_text(f)
    return f"({s})" if isinstance(f, kinds) else s


# -- JSON ---------------------------------------------------------------------

def to_json(f: Formula) -> dict:
    if isinstance(f, Atom):
        return {"node": "atom", "lhs": f.lhs, "op": f.op, "rhs": f.rhs}
    if isinstance(f, RelAtom):
        return {"node": "rel", "name": f.name, "args": list(f.args)}
    if isinstance(f, Not):
        return {"node": "not", "arg": to_json(f.arg)}
    if isinstance(f, (And, Or)):
        return {"node": "and" if isinstance(f, And) else "or", "args": [to_json(a) for a in f.args]}
    if isinstance(f, (Exists, Forall)):
        node = "exists" if isinstance(f, Exists) else "forall"
        return {"node": node, "var": f.var, "body": to_json(f.body)}
    raise TypeError(f"not a formula: {f!r}")


def from_json(d: Mapping) -> Formula:
    node = d["node"]
    if node == "atom":
        return Atom(d["lhs"], d["op"], d["rhs"])
    if node == "rel":
        return RelAtom(d["name"], tuple(d["args"]))
    if node == "not":
        return Not(from_json(d["arg"]))
    if node == "and":
        return And(tuple(from_json(a) for a in d["args"]))
    if node == "or":
        return Or(tuple(from_json(a) for a in d["args"]))
    if node == "exists":
        return Exists(d["var"], from_json(d["body"]))
    if node == "forall":
        return Forall(d["var"], from_json(d["body"]))
    raise ValueError(f"unknown node {node!r}")


# -- structure ----------------------------------------------------------------

def free_variables(f: Formula) -> list[str]:
    """Free variables in order of first occurrence."""
    out: list[str] = []

    def walk(g: Formula, bound: frozenset) -> None:
        if isinstance(g, Atom):
            names = (g.lhs, g.rhs)
        elif isinstance(g, RelAtom):
            names = g.args
        elif isinstance(g, Not):
            walk(g.arg, bound)
            return
        elif isinstance(g, (And, Or)):
            for a in g.args:
                walk(a, bound)
            return
        else:
            walk(g.body, bound | {g.var})
            return
        for v in names:
            if v not in bound and v not in out:
                out.append(v)

    walk(f, frozenset())
    return out


def split_prefix(f: Formula) -> tuple[list[tuple[str, str]], Formula]:
    """Peel a quantifier prefix: ``([('E'|'A', var), ...], matrix)``."""
    prefix = []
    while isinstance(f, (Exists, Forall)):
        prefix.append(("E" if isinstance(f, Exists) else "A", f.var))
        f = f.body
    return prefix, f


def conjuncts(f: Formula) -> list[Formula] | None:
    """Flattened atom list of a conjunction of atoms, else None."""
    if isinstance(f, (Atom, RelAtom)):
        return [f]
    if isinstance(f, And):
        out = []
        for a in f.args:
            sub = conjuncts(a)
            if sub is None:
                return None
            out.extend(sub)
        return out
    return None


def has_quantifier(f: Formula) -> bool:
    if isinstance(f, (Exists, Forall)):
        return True
    if isinstance(f, Not):
        return has_quantifier(f.arg)
    if isinstance(f, (And, Or)):
        return any(has_quantifier(a) for a in f.args)
    return False


def classify(f: Formula) -> str:
    if not has_quantifier(f):
        return QF
    prefix, matrix = split_prefix(f)
    if conjuncts(matrix) is None:
        return GENERAL
    if all(q == "E" for q, _ in prefix):
        return PP
    return FAE


# -- evaluation ---------------------------------------------------------------

def eval_on_weak_order(
    f: Formula,
    w: WeakOrder,
    binding: Mapping[str, int],
    relations: Mapping[str, object] | None = None,
) -> bool:
    """Truth of a quantifier-free formula on any tuple of the orbit ``w``.

    ``binding`` maps variable names to 0-based coordinates of ``w``.
    Relation atoms need ``relations``: name -> object with ``arity`` and
    ``contains_ranks``.
    """
    ranks = w.ranks

    def rank(v: str) -> int:
        try:
            return ranks[binding[v]]
        except KeyError:
            raise UnboundVariable(v) from None

    def ev(g: Formula) -> bool:
        if isinstance(g, Atom):
            a, b = rank(g.lhs), rank(g.rhs)
            if g.op == "<":
                return a < b
            if g.op == "<=":
                return a <= b
            if g.op == "=":
                return a == b
            return a != b
        if isinstance(g, RelAtom):
            if relations is None or g.name not in relations:
                raise KeyError(f"unknown relation symbol {g.name!r}")
            rel = relations[g.name]
            if rel.arity != len(g.args):
                raise ValueError(f"arity mismatch in atom {to_text(g)}")
            return rel.contains_ranks(tuple(rank(v) for v in g.args))
        if isinstance(g, Not):
            return not ev(g.arg)
        if isinstance(g, And):
            return all(ev(a) for a in g.args)
        if isinstance(g, Or):
            return any(ev(a) for a in g.args)
        raise ValueError("eval_on_weak_order needs a quantifier-free formula")

    return ev(f)


def eval_on_values(f: Formula, values: Mapping[str, object]) -> bool:
    """Direct evaluation of a quantifier-free comparator formula on numbers."""
    if isinstance(f, Atom):
        a, b = values[f.lhs], values[f.rhs]
        return {"<": a < b, "<=": a <= b, "=": a == b, "!=": a != b}[f.op]
    if isinstance(f, Not):
        return not eval_on_values(f.arg, values)
    if isinstance(f, And):
        return all(eval_on_values(a, values) for a in f.args)
    if isinstance(f, Or):
        return any(eval_on_values(a, values) for a in f.args)
    raise ValueError(f"cannot evaluate {type(f).__name__} on values")


def satisfying_orbits(
    f: Formula,
    variables: Sequence[str],
    relations: Mapping[str, object] | None = None,
    max_arity: int | None = None,
) -> frozenset[WeakOrder]:
    """Orbits of ``variables`` on which the quantifier-free ``f`` holds."""
    if has_quantifier(f):
        raise ValueError("relation_of needs a quantifier-free formula")
    missing = [v for v in free_variables(f) if v not in variables]
    if missing:
        raise UnboundVariable(", ".join(missing))
    if len(set(variables)) != len(variables):
        raise ValueError("duplicate variable in variable order")
    binding = {v: i for i, v in enumerate(variables)}
    return frozenset(
        w for w in enumerate_weak_orders(len(variables), max_arity)
        if eval_on_weak_order(f, w, binding, relations)
    )


def atom_vars(f: Formula) -> tuple[str, ...]:
    if isinstance(f, Atom):
        return (f.lhs, f.rhs)
    if isinstance(f, RelAtom):
        return f.args
    raise TypeError(f"not an atom: {f!r}")


def conj(parts: Sequence[Formula]) -> Formula:
    parts = list(parts)
    return parts[0] if len(parts) == 1 else And(tuple(parts))


def disj(parts: Sequence[Formula]) -> Formula:
    parts = list(parts)
    return parts[0] if len(parts) == 1 else Or(tuple(parts))
