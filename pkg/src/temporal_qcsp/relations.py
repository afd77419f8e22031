"""Temporal relations as orbit sets, the gadget catalog, pp evaluation and search."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from . import formulas as fm
from .orders import (
    WeakOrder,
    all_equal,
    canonicalize,
    dual_order,
    enumerate_weak_orders,
    extensions,
    joins,
    order_index,
    restrict,
)

log = logging.getLogger(__name__)

VAR_NAMES = ("x", "y", "z", "w", "v", "s", "t")


def default_vars(n: int) -> tuple[str, ...]:
    if n <= len(VAR_NAMES):
        return VAR_NAMES[:n]
    return tuple(f"x{i + 1}" for i in range(n))


@dataclass(frozen=True)
class TemporalRelation:
    arity: int
    orbits: frozenset[WeakOrder]
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "orbits", frozenset(self.orbits))
        for w in self.orbits:
            if w.arity != self.arity:
                raise ValueError(f"orbit {w} does not have arity {self.arity}")
        object.__setattr__(self, "_ranks", frozenset(w.ranks for w in self.orbits))

    def __contains__(self, item) -> bool:
        if isinstance(item, WeakOrder):
            return item.ranks in self._ranks
        return canonicalize(item).ranks in self._ranks

    def contains_ranks(self, ranks: Sequence[int]) -> bool:
        return canonicalize(ranks).ranks in self._ranks

    def __len__(self) -> int:
        return len(self.orbits)

    def sorted_orbits(self) -> list[WeakOrder]:
        return sorted(self.orbits)

    def named(self, name: str) -> "TemporalRelation":
        return TemporalRelation(self.arity, self.orbits, name)

    def mask(self) -> int:
        idx = order_index(self.arity)
        m = 0
        for w in self.orbits:
            m |= 1 << idx[w.ranks]
        return m

    @classmethod
    def from_mask(cls, n: int, mask: int, name: str | None = None) -> "TemporalRelation":
        ws = enumerate_weak_orders(n)
        return cls(n, frozenset(ws[i] for i in range(len(ws)) if mask >> i & 1), name)

    @classmethod
    def from_formula(cls, text_or_formula, variables: Sequence[str] | None = None,
                     name: str | None = None, max_arity: int | None = None) -> "TemporalRelation":
        return relation_of(text_or_formula, variables, name=name, max_arity=max_arity)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "arity": self.arity,
            "orbits": [w.to_json() for w in self.sorted_orbits()],
        }

    def __repr__(self) -> str:
        label = self.name or "R"
        return f"{label}/{self.arity}[{len(self.orbits)} orbits]"


def relation_of(f, variables: Sequence[str] | None = None, name: str | None = None,
                max_arity: int | None = None) -> TemporalRelation:
    """Relation defined by a quantifier-free comparator formula.

    ``variables`` fixes the coordinate order; it must contain every free
    variable and may add unconstrained ones.  Defaults to first occurrence.
    """
    if isinstance(f, str):
        f = fm.parse(f)
    if variables is None:
        variables = fm.free_variables(f)
    orbits = fm.satisfying_orbits(f, list(variables), max_arity=max_arity)
    return TemporalRelation(len(variables), orbits, name)


# -- set algebra ----------------------------------------------------------------

def _same_arity(r1: TemporalRelation, r2: TemporalRelation) -> None:
    if r1.arity != r2.arity:
        raise ValueError(f"arity mismatch: {r1.arity} vs {r2.arity}")


def complement(r: TemporalRelation) -> TemporalRelation:
    return TemporalRelation(r.arity, frozenset(enumerate_weak_orders(r.arity)) - r.orbits)


def intersection(r1: TemporalRelation, r2: TemporalRelation) -> TemporalRelation:
    _same_arity(r1, r2)
    return TemporalRelation(r1.arity, r1.orbits & r2.orbits)


def union(r1: TemporalRelation, r2: TemporalRelation) -> TemporalRelation:
    _same_arity(r1, r2)
    return TemporalRelation(r1.arity, r1.orbits | r2.orbits)


def dual_relation(r: TemporalRelation) -> TemporalRelation:
    name = None
    if r.name:
        name = r.name[:-5] if r.name.endswith("_dual") else r.name + "_dual"
    return TemporalRelation(r.arity, frozenset(dual_order(w) for w in r.orbits), name)


def permute(r: TemporalRelation, order: Sequence[int]) -> TemporalRelation:
    """Relation R(x[order[0]], ..., x[order[n-1]]) as a relation on x."""
    inv = [0] * len(order)
    for i, o in enumerate(order):
        inv[o] = i
    return TemporalRelation(r.arity, frozenset(restrict(w, inv) for w in r.orbits))


# -- catalog --------------------------------------------------------------------

_SEP_ORDERS = [
    ("x1", "x2", "y1", "y2"), ("x1", "y2", "y1", "x2"), ("y1", "x2", "x1", "y2"),
    ("y1", "y2", "x1", "x2"), ("x2", "x1", "y2", "y1"), ("x2", "y1", "y2", "x1"),
    ("y2", "x1", "x2", "y1"), ("y2", "y1", "x2", "x1"),
]


def _chain(names: Sequence[str]) -> str:
    return " & ".join(f"{a}<{b}" for a, b in zip(names, names[1:]))


def eqor_formula(n: int) -> tuple[str, tuple[str, ...]]:
    vs = tuple(f"x{i + 1}" for i in range(n))
    parts = [f"{vs[i]}={vs[j]}" for i in range(n) for j in range(i + 1, n)]
    return " | ".join(parts), vs


CATALOG_FORMULAS: dict[str, tuple[str, str, tuple[str, ...]]] = {
    # key: (display name, formula, variable order)
    "betwc": ("BetwC", "(x<y & y<z) | (x>y & y>z) | (x=y & y=z)", ("x", "y", "z")),
    "cyclc": ("CyclC", "(x<y & y<z) | (y<z & z<x) | (z<x & x<y) | (x=y & y=z)", ("x", "y", "z")),
    "eqxor": ("EqXor", "x=y | x=z", ("x", "y", "z")),
    "s": ("S", "(x=y & y=z) | (x!=y & x!=z & z!=y)", ("x", "y", "z")),
    "i": ("I", "x!=y | y=z", ("x", "y", "z")),
    "betw": ("Betw", "(x<y & y<z) | (x>y & y>z)", ("x", "y", "z")),
    "cycl": ("Cycl", "(x<y & y<z) | (y<z & z<x) | (z<x & x<y)", ("x", "y", "z")),
    "sep": ("Sep", " | ".join(f"({_chain(o)})" for o in _SEP_ORDERS), ("x1", "y1", "x2", "y2")),
    "less": ("Less", "x<y", ("x", "y")),
    "leq": ("Leq", "x<=y", ("x", "y")),
    "eq": ("Eq", "x=y", ("x", "y")),
    "neq": ("Neq", "x!=y", ("x", "y")),
    "greater": ("Greater", "x>y", ("x", "y")),
    "geq": ("Geq", "x>=y", ("x", "y")),
}

MAX_EQOR = 5


@lru_cache(maxsize=None)
def catalog(key: str) -> TemporalRelation:
    """Named gadget relation; ``eqor3`` .. ``eqor5`` are built on demand."""
    key = key.lower()
    if key.startswith("eqor"):
        n = int(key[4:])
        if not 3 <= n <= MAX_EQOR:
            raise ValueError(f"EqOr_n is materialized for 3 <= n <= {MAX_EQOR}")
        text, vs = eqor_formula(n)
        return relation_of(text, vs, name=f"EqOr{n}")
    if key not in CATALOG_FORMULAS:
        raise KeyError(f"unknown catalog relation {key!r}")
    display, text, vs = CATALOG_FORMULAS[key]
    return relation_of(text, vs, name=display)


def catalog_keys() -> list[str]:
    return list(CATALOG_FORMULAS) + [f"eqor{n}" for n in range(3, MAX_EQOR + 1)]


BUILTIN_ATOMS = {"<": "less", "<=": "leq", "=": "eq", "!=": "neq"}


# -- languages ------------------------------------------------------------------

class Language:
    """An ordered, named list of temporal relations."""

    def __init__(self, relations: Iterable[tuple[str, TemporalRelation]] = ()):
        self._rels: dict[str, TemporalRelation] = {}
        self.warnings: list[str] = []
        for name, rel in relations:
            self.add(name, rel)

    def add(self, name: str, rel: TemporalRelation) -> None:
        if name in self._rels:
            raise ValueError(f"duplicate relation name {name!r}")
        for other, r in self._rels.items():
            if r == rel:
                msg = f"relation {name!r} duplicates {other!r}; dropped"
                log.warning(msg)
                self.warnings.append(msg)
                return
        self._rels[name] = rel.named(rel.name or name)

    def __getitem__(self, name: str) -> TemporalRelation:
        return self._rels[name]

    def __contains__(self, name: str) -> bool:
        return name in self._rels

    def __iter__(self) -> Iterator[str]:
        return iter(self._rels)

    def __len__(self) -> int:
        return len(self._rels)

    def items(self):
        return self._rels.items()

    def relations(self) -> list[TemporalRelation]:
        return list(self._rels.values())

    def resolve(self, atom) -> TemporalRelation:
        """Relation behind an atom; comparator atoms are built-in relations."""
        if isinstance(atom, fm.Atom):
            return catalog(BUILTIN_ATOMS[atom.op])
        if atom.name not in self._rels:
            raise KeyError(f"unknown relation symbol {atom.name!r}")
        rel = self._rels[atom.name]
        if rel.arity != len(atom.args):
            raise ValueError(
                f"arity mismatch in atom {fm.to_text(atom)}: {atom.name} has arity {rel.arity}")
        return rel

    def dual(self) -> "Language":
        return Language((name + "_dual" if not name.endswith("_dual") else name[:-5],
                         dual_relation(r)) for name, r in self._rels.items())

    def max_arity(self) -> int:
        return max((r.arity for r in self._rels.values()), default=0)

    @classmethod
    def of(cls, *keys: str) -> "Language":
        return cls((k, catalog(k)) for k in keys)

    def to_json(self) -> dict:
        return {"relations": [
            {"name": n, "arity": r.arity, "orbits": [w.to_json() for w in r.sorted_orbits()]}
            for n, r in self._rels.items()
        ]}


class LanguageFileError(ValueError):
    pass


def language_from_json(data: Mapping, source: str = "<language>",
                       max_arity: int | None = None) -> Language:
    if not isinstance(data, Mapping) or "relations" not in data:
        raise LanguageFileError(f"{source}: expected an object with a 'relations' list")
    lang = Language()
    for k, entry in enumerate(data["relations"]):
        where = f"{source}: relations[{k}]"
        try:
            name = entry["name"]
            arity = int(entry["arity"])
        except (KeyError, TypeError, ValueError) as exc:
            raise LanguageFileError(f"{where}: needs 'name' and 'arity'") from exc
        rel = None
        if "formula" in entry:
            try:
                f = fm.parse(entry["formula"])
            except fm.FormulaSyntaxError as exc:
                raise LanguageFileError(f"{where}: {exc}") from exc
            variables = entry.get("vars") or fm.free_variables(f)
            if len(variables) != arity:
                raise LanguageFileError(
                    f"{where}: formula has {len(variables)} variables, arity is {arity}"
                    " (give 'vars' to fix the coordinate order)")
            rel = relation_of(f, variables, name=name, max_arity=max_arity)
        if "orbits" in entry:
            try:
                orbits = frozenset(WeakOrder.from_json(o) for o in entry["orbits"])
            except ValueError as exc:
                raise LanguageFileError(f"{where}: bad orbit: {exc}") from exc
            if any(w.arity != arity for w in orbits):
                raise LanguageFileError(f"{where}: orbit arity differs from {arity}")
            listed = TemporalRelation(arity, orbits, name)
            if rel is not None and rel != listed:
                raise LanguageFileError(f"{where}: formula and orbit list disagree")
            rel = listed
        if rel is None:
            raise LanguageFileError(f"{where}: needs 'formula' or 'orbits'")
        lang.add(name, rel)
    return lang


def load_language(path: str | Path, max_arity: int | None = None) -> Language:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise LanguageFileError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return language_from_json(data, str(path), max_arity)


# -- pp evaluation ----------------------------------------------------------------

def _atom_table(rel: TemporalRelation, args: Sequence[str]) -> tuple[tuple[str, ...], set[tuple[int, ...]]]:
    """Relation of an atom on its distinct variables (repeats identified)."""
    distinct: list[str] = []
    for v in args:
        if v not in distinct:
            distinct.append(v)
    first = [distinct.index(v) for v in args]
    keep = [args.index(v) for v in distinct]
    rows = set()
    for w in rel.orbits:
        r = w.ranks
        if all(r[i] == r[keep[first[i]]] for i in range(len(args))):
            rows.add(restrict(w, keep).ranks)
    return tuple(distinct), rows


def _project(vars_: tuple[str, ...], rows: set, keep_vars: Sequence[str]):
    keep = [vars_.index(v) for v in keep_vars]
    if not keep:
        return (), ({()} if rows else set())
    return tuple(keep_vars), {restrict(WeakOrder(r), keep).ranks for r in rows}


def _join(state, table):
    vars1, rows1 = state
    vars2, rows2 = table
    if not vars1:
        return (vars2, set(rows2)) if rows1 else (vars2, set())
    out_vars = None
    rows = set()
    for r1 in rows1:
        w1 = WeakOrder(r1)
        for r2 in rows2:
            ov, ws = joins(w1, vars1, WeakOrder(r2), vars2)
            out_vars = ov
            rows.update(w.ranks for w in ws)
    if out_vars is None:
        out_vars = tuple(vars1) + tuple(v for v in vars2 if v not in vars1)
    return out_vars, rows


def pp_solutions(atoms: Sequence, language: Language, keep: Sequence[str]):
    """Orbits over ``keep`` of the existential closure of a conjunction of atoms.

    Returns ``(keep, rows)`` with rows as rank tuples; for ``keep == ()`` the
    rows are ``{()}`` (satisfiable) or empty.
    """
    tables = [_atom_table(language.resolve(a), fm.atom_vars(a)) for a in atoms]
    keep = tuple(keep)
    state: tuple = ((), {()})
    pending = list(range(len(tables)))
    while pending:
        known = set(state[0])
        # fewest new variables first; ties by formula order
        k = min(pending, key=lambda t: (len(set(tables[t][0]) - known), t))
        pending.remove(k)
        state = _join(state, tables[k])
        if not state[1]:
            return keep, set()
        still = {v for t in pending for v in tables[t][0]}
        live = [v for v in state[0] if v in still or v in keep]
        if len(live) < len(state[0]):
            state = _project(state[0], state[1], live)
    vars_, rows = state
    for v in keep:
        if v not in vars_:
            grown = set()
            for r in rows:
                if not r:
                    grown.add((0,))
                else:
                    grown.update(w.ranks for w in extensions(WeakOrder(r)))
            vars_, rows = vars_ + (v,), grown
    return _project(vars_, rows, keep)


def _pp_parts(f):
    if isinstance(f, str):
        f = fm.parse(f)
    prefix, matrix = fm.split_prefix(f)
    if any(q != "E" for q, _ in prefix):
        raise ValueError("pp formula may only use existential quantifiers")
    atoms = fm.conjuncts(matrix)
    if atoms is None:
        raise ValueError("pp formula matrix must be a conjunction of atoms")
    return f, atoms


def pp_evaluate(f, language: Language, free: Sequence[str] | None = None,
                name: str | None = None) -> TemporalRelation:
    """Exact relation defined by a pp formula over ``language``."""
    f, atoms = _pp_parts(f)
    fv = fm.free_variables(f)
    if free is None:
        free = fv
    missing = [v for v in fv if v not in free]
    if missing:
        raise ValueError(f"free variables {missing} missing from output order")
    if not free:
        raise ValueError("pp_evaluate needs at least one free variable; use pp_satisfiable")
    _, rows = pp_solutions(atoms, language, free)
    return TemporalRelation(len(free), frozenset(WeakOrder(r) for r in rows), name)


def pp_satisfiable(f, language: Language) -> bool:
    f, atoms = _pp_parts(f)
    if fm.free_variables(f):
        raise ValueError("pp_satisfiable needs a sentence")
    _, rows = pp_solutions(atoms, language, ())
    return bool(rows)


# -- bounded pp-definability search ---------------------------------------------------

@lru_cache(maxsize=None)
def rank_matrix(n: int) -> np.ndarray:
    return np.array([w.ranks for w in enumerate_weak_orders(n, max_arity=n)], dtype=np.int64)


def _pattern_codes(cols: np.ndarray) -> np.ndarray:
    """Integer code of the weak-order pattern of each row (pairwise signs)."""
    k = cols.shape[1]
    code = np.zeros(cols.shape[0], dtype=np.int64)
    for i in range(k):
        for j in range(i + 1, k):
            code = code * 3 + (np.sign(cols[:, i] - cols[:, j]) + 1)
    return code


def _rel_codes(rel: TemporalRelation) -> np.ndarray:
    if not rel.orbits:
        return np.zeros(0, dtype=np.int64)
    return _pattern_codes(np.array([w.ranks for w in rel.orbits], dtype=np.int64))


def _pack(bits: np.ndarray) -> int:
    return int.from_bytes(np.packbits(bits.astype(np.uint8), bitorder="little").tobytes(), "little")


@dataclass(frozen=True)
class PPDefinition:
    atoms: tuple[fm.RelAtom, ...]
    free: tuple[str, ...]
    exists: tuple[str, ...]

    def formula(self) -> fm.Formula | None:
        if not self.atoms:
            return None
        f: fm.Formula = fm.conj(self.atoms)
        for v in reversed(self.exists):
            f = fm.Exists(v, f)
        return f

    def text(self) -> str:
        f = self.formula()
        return "true" if f is None else fm.to_text(f)


@dataclass(frozen=True)
class NotFoundWithinBound:
    max_exists: int
    max_atoms: int
    exhausted: bool = True
    note: str = ""

    def __bool__(self) -> bool:
        return False


def pp_search(target: TemporalRelation, language: Language, max_exists: int = 2,
              max_atoms: int = 4, max_states: int = 200_000,
              max_arity: int | None = None):
    """Smallest pp definition of ``target`` over ``language`` within bounds.

    Breadth-first over conjunctions: each state is the orbit set, over the
    free plus existential variables, of the conjunction built so far (a bit
    mask), deduplicated.  A state survives only while its projection still
    covers the target.  Returns a ``PPDefinition`` or ``NotFoundWithinBound``;
    the latter has ``exhausted=False`` when ``max_states`` cut the search.
    """
    from .orders import DEFAULT_MAX_ARITY

    n = target.arity
    ceiling = DEFAULT_MAX_ARITY if max_arity is None else max_arity
    note = ""
    if n + max_exists > ceiling:
        note = f"existential variables capped at {ceiling - n} by the arity ceiling"
        max_exists = max(0, ceiling - n)
    V = n + max_exists
    free = default_vars(n) if n + max_exists <= len(VAR_NAMES) else tuple(f"x{i+1}" for i in range(n))
    ex = tuple(f"u{i + 1}" for i in range(max_exists))
    names = free + ex
    R = rank_matrix(V)
    N = R.shape[0]
    full = (1 << N) - 1

    atoms: list[tuple[fm.RelAtom, int]] = []
    for rname, rel in language.items():
        codes = _rel_codes(rel)
        for args in product(range(V), repeat=rel.arity):
            bits = np.isin(_pattern_codes(R[:, list(args)]), codes)
            atoms.append((fm.RelAtom(rname, tuple(names[a] for a in args)), _pack(bits)))

    proj_codes = _pattern_codes(R[:, :n])
    target_codes = set(_rel_codes(target).tolist())
    fibers_in, bad_bits = [], np.zeros(N, dtype=bool)
    for code in np.unique(proj_codes):
        sel = proj_codes == code
        if int(code) in target_codes:
            fibers_in.append(_pack(sel))
        else:
            bad_bits |= sel
    bad = _pack(bad_bits)
    if len(fibers_in) != len(target.orbits):
        raise AssertionError("target orbit missing from projection table")

    def viable(m: int) -> bool:
        return all(m & f for f in fibers_in)

    def exact(m: int) -> bool:
        return m & bad == 0

    if exact(full):
        return PPDefinition((), free, ())
    seen = {full}
    level: list[tuple[tuple[int, ...], int]] = [((), full)]
    exhausted = True
    for _depth in range(max_atoms):
        nxt: list[tuple[tuple[int, ...], int]] = []
        hits: list[tuple[int, ...]] = []
        for seq, mask in level:
            for a, (_, amask) in enumerate(atoms):
                m = mask & amask
                if m == mask or m in seen or not viable(m):
                    continue
                seen.add(m)
                s = tuple(sorted(seq + (a,)))
                if exact(m):
                    hits.append(s)
                nxt.append((s, m))
            if len(seen) > max_states:
                exhausted = False
                break
        if hits:
            best = min(hits)
            return _certificate([atoms[a][0] for a in best], free, ex)
        if not exhausted:
            break
        level = nxt
    return NotFoundWithinBound(max_exists, max_atoms, exhausted, note)


def _certificate(atoms: list[fm.RelAtom], free, ex) -> PPDefinition:
    used = []
    for a in atoms:
        for v in a.args:
            if v in ex and v not in used:
                used.append(v)
    rename = {v: f"u{i + 1}" for i, v in enumerate(used)}
    atoms = [fm.RelAtom(a.name, tuple(rename.get(v, v) for v in a.args)) for a in atoms]
    return PPDefinition(tuple(atoms), tuple(free), tuple(rename[v] for v in used))


def check_pp_definition(defn: PPDefinition, target: TemporalRelation, language: Language) -> bool:
    f = defn.formula()
    if f is None:
        return len(target.orbits) == len(enumerate_weak_orders(target.arity))
    return pp_evaluate(f, language, defn.free) == target


# -- dual closure ------------------------------------------------------------------

@dataclass(frozen=True)
class DualClosureEntry:
    relation: str
    status: str            # "self-dual" | "in-language" | "pp-defined" | "unverified"
    witness: str = ""


@dataclass(frozen=True)
class DualClosureReport:
    entries: tuple[DualClosureEntry, ...]

    @property
    def closed(self) -> bool:
        return all(e.status != "unverified" for e in self.entries)

    @property
    def unverified(self) -> list[str]:
        return [e.relation for e in self.entries if e.status == "unverified"]


def dual_closure_report(language: Language, max_exists: int = 2, max_atoms: int = 4,
                        max_states: int = 200_000) -> DualClosureReport:
    entries = []
    for name, rel in language.items():
        d = dual_relation(rel)
        if d == rel:
            entries.append(DualClosureEntry(name, "self-dual"))
            continue
        match = next((n for n, r in language.items() if r == d), None)
        if match is not None:
            entries.append(DualClosureEntry(name, "in-language", match))
            continue
        found = pp_search(d, language, max_exists, max_atoms, max_states)
        if found:
            entries.append(DualClosureEntry(name, "pp-defined", found.text()))
        else:
            entries.append(DualClosureEntry(name, "unverified"))
    return DualClosureReport(tuple(entries))
