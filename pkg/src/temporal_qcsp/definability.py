"""Ord-Horn, positive, equality and guarded Ord-Horn definability.

All procedures work on orbit bit masks over the weak orders of a fixed
arity: a formula over the coordinates is identified with the set of orbits
satisfying it, so entailment is mask inclusion and conjunction is ``&``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence, Union

from . import formulas as fm
from .orders import WeakOrder, enumerate_weak_orders
from .relations import TemporalRelation, _pack, default_vars, rank_matrix


class NotOrdHornInput(ValueError):
    pass


# -- atom masks ------------------------------------------------------------------

class AtomMasks:
    """Orbit masks of the comparator atoms x_i op x_j at arity n."""

    def __init__(self, n: int):
        self.n = n
        ranks = rank_matrix(n)
        self.size = ranks.shape[0]
        self.full = (1 << self.size) - 1
        self.eq = {}
        self.lt = {}
        for i in range(n):
            for j in range(n):
                if i != j:
                    self.eq[i, j] = _pack(ranks[:, i] == ranks[:, j])
                    self.lt[i, j] = _pack(ranks[:, i] < ranks[:, j])

    def le(self, i: int, j: int) -> int:
        return self.lt[i, j] | self.eq[i, j]

    def ne(self, i: int, j: int) -> int:
        return self.full & ~self.eq[i, j]

    def ne_any(self, pairs: Iterable[tuple[int, int]]) -> int:
        m = 0
        for i, j in pairs:
            m |= self.ne(i, j)
        return m

    def eq_all(self, pairs: Iterable[tuple[int, int]]) -> int:
        m = self.full
        for i, j in pairs:
            m &= self.eq[i, j]
        return m

    def le_all(self, pairs: Iterable[tuple[int, int]]) -> int:
        m = self.full
        for i, j in pairs:
            m &= self.le(i, j)
        return m


@lru_cache(maxsize=None)
def atom_masks(n: int) -> AtomMasks:
    return AtomMasks(n)


def _names(n: int, variables: Sequence[str] | None) -> tuple[str, ...]:
    return tuple(variables) if variables is not None else default_vars(n)


def _unordered_pairs(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def _minimal_hitting(pairs: Sequence[tuple[int, int]], covers, target: int,
                     max_size: int | None = None) -> list[tuple[tuple[int, int], ...]]:
    """Inclusion-minimal pair sets D with ``covers(D) ⊇ target``, smallest first."""
    found: list[frozenset] = []
    out = []
    limit = len(pairs) if max_size is None else min(max_size, len(pairs))
    for k in range(0, limit + 1):
        for combo in combinations(pairs, k):
            s = frozenset(combo)
            if any(f <= s for f in found):
                continue
            if target & ~covers(combo) == 0:
                found.append(s)
                out.append(combo)
    return out


def _greedy_cover(target: int, full: int, parts: Sequence[tuple[int, object]]) -> list | None:
    """Subset of ``parts`` (mask, payload) whose masks intersect to ``target``.

    Parts are taken in the given order when they cut something away, then
    any part made redundant by later ones is dropped.
    """
    current = full
    chosen = []
    for mask, payload in parts:
        if current & ~mask:
            current &= mask
            chosen.append((mask, payload))
            if current == target:
                break
    if current != target:
        return None
    k = 0
    while k < len(chosen):
        rest = full
        for idx, (m, _) in enumerate(chosen):
            if idx != k:
                rest &= m
        if rest == target:
            chosen.pop(k)
        else:
            k += 1
    return [p for _, p in chosen]


# -- results ------------------------------------------------------------------------

@dataclass(frozen=True)
class Certificate:
    kind: str
    text: str
    parts: tuple[str, ...] = ()

    def formula(self) -> fm.Formula:
        return fm.parse(self.text)

    def __bool__(self) -> bool:
        return True

    def to_json(self) -> dict:
        return {"kind": self.kind, "definable": True, "certificate": self.text, "parts": list(self.parts)}


@dataclass(frozen=True)
class NotDefinable:
    kind: str
    reason: str
    witness: tuple[WeakOrder, ...] = ()

    def __bool__(self) -> bool:
        return False

    def to_json(self) -> dict:
        return {"kind": self.kind, "definable": False, "reason": self.reason,
                "witness": [w.to_json() for w in self.witness]}


TRUE_TEXT, FALSE_TEXT = "true", "false"


def certificate_relation(cert: Certificate, arity: int,
                         variables: Sequence[str] | None = None) -> TemporalRelation:
    """Orbit set of a certificate; handles the constant certificates."""
    names = _names(arity, variables)
    ws = enumerate_weak_orders(arity)
    if cert.text == TRUE_TEXT:
        return TemporalRelation(arity, frozenset(ws))
    if cert.text == FALSE_TEXT:
        return TemporalRelation(arity, frozenset())
    return TemporalRelation(arity, fm.satisfying_orbits(cert.formula(), list(names)))


# -- Ord-Horn ------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class OHClause:
    disequalities: tuple[tuple[int, int], ...]
    literal: tuple[int, str, int] | None = None

    def size(self) -> int:
        return len(self.disequalities) + (self.literal is not None)

    def mask(self, am: AtomMasks) -> int:
        m = am.ne_any(self.disequalities)
        if self.literal is not None:
            i, op, j = self.literal
            m |= {"<": am.lt[i, j], "<=": am.le(i, j), "=": am.eq[i, j]}[op]
        return m

    def text(self, names: Sequence[str]) -> str:
        parts = [f"{names[i]}!={names[j]}" for i, j in self.disequalities]
        if self.literal is not None:
            i, op, j = self.literal
            parts.append(f"{names[i]}{op}{names[j]}")
        return " | ".join(parts) if parts else FALSE_TEXT


def _oh_literals(n: int) -> list[tuple[int, str, int] | None]:
    lits: list = [None]
    for i, j in _unordered_pairs(n):
        lits.append((i, "=", j))
    for i in range(n):
        for j in range(n):
            if i != j:
                lits.append((i, "<=", j))
                lits.append((i, "<", j))
    return lits


def entailed_oh_clauses(rel: TemporalRelation) -> list[OHClause]:
    """All inclusion-minimal Ord-Horn clauses true on every orbit of ``rel``."""
    n = rel.arity
    am = atom_masks(n)
    r = rel.mask()
    pairs = _unordered_pairs(n)
    out = []
    for lit in _oh_literals(n):
        lit_mask = OHClause((), lit).mask(am) if lit is not None else 0
        todo = r & ~lit_mask
        for d in _minimal_hitting(pairs, am.ne_any, todo):
            out.append(OHClause(tuple(d), lit))
    # a literal clause may be subsumed by another literal's clause (e.g. x<y by x<=y)
    return sorted(set(out), key=lambda c: (c.size(), c))


def _conjunction_text(parts: Sequence[str], empty: str = TRUE_TEXT) -> str:
    if not parts:
        return empty
    if len(parts) == 1:
        return parts[0]
    return " & ".join(f"({p})" if " | " in p else p for p in parts)


def ordhorn_definition(rel: TemporalRelation, variables: Sequence[str] | None = None):
    names = _names(rel.arity, variables)
    am = atom_masks(rel.arity)
    r = rel.mask()
    clauses = entailed_oh_clauses(rel)
    chosen = _greedy_cover(r, am.full, [(c.mask(am), c) for c in clauses])
    if chosen is None:
        current = am.full
        for c in clauses:
            current &= c.mask(am)
        extra = TemporalRelation.from_mask(rel.arity, current & ~r)
        return NotDefinable("oh", "entailed Ord-Horn clauses admit orbits outside the relation",
                            tuple(extra.sorted_orbits()[:1]))
    texts = tuple(c.text(names) for c in chosen)
    return Certificate("oh", _conjunction_text(texts), texts)


def is_ordhorn(rel: TemporalRelation) -> bool:
    return bool(ordhorn_definition(rel))


# -- positive -----------------------------------------------------------------------

def _adjacent_merges(w: WeakOrder) -> list[WeakOrder]:
    return [WeakOrder(tuple(r if r <= b else r - 1 for r in w.ranks)) for b in range(w.blocks - 1)]


def _le_chain(w: WeakOrder, names: Sequence[str]) -> str:
    blocks = w.block_members()
    atoms = []
    for b in blocks:
        if len(b) > 1:
            cyc = list(b) + [b[0]]
            atoms += [f"{names[a]}<={names[c]}" for a, c in zip(cyc, cyc[1:])]
    for b1, b2 in zip(blocks, blocks[1:]):
        atoms.append(f"{names[b1[0]]}<={names[b2[0]]}")
    if not atoms:
        atoms.append(f"{names[0]}<={names[0]}")
    return " & ".join(atoms)


def positive_definition(rel: TemporalRelation, variables: Sequence[str] | None = None):
    """Up-closure test in the atom-inclusion order, with a DNF certificate."""
    names = _names(rel.arity, variables)
    for w in rel.sorted_orbits():
        for v in _adjacent_merges(w):
            if v not in rel:
                return NotDefinable("positive", "not upward closed under merging adjacent blocks", (w, v))
    if not rel.orbits:
        return Certificate("positive", FALSE_TEXT)
    merged = {v for w in rel.orbits for v in _adjacent_merges(w)}
    minimal = [w for w in rel.sorted_orbits() if w not in merged]
    parts = tuple(_le_chain(w, names) for w in minimal)
    text = parts[0] if len(parts) == 1 else " | ".join(f"({p})" if "&" in p else p for p in parts)
    return Certificate("positive", text, parts)


# -- equality -----------------------------------------------------------------------

def _pattern_text(w: WeakOrder, names: Sequence[str]) -> str:
    blocks = sorted(w.block_members())
    atoms = []
    for b in blocks:
        atoms += [f"{names[b[0]]}={names[c]}" for c in b[1:]]
    reps = [b[0] for b in blocks]
    atoms += [f"{names[a]}!={names[c]}" for a, c in combinations(reps, 2)]
    if not atoms:
        atoms.append(f"{names[0]}={names[0]}")
    return " & ".join(atoms)


def equality_definition(rel: TemporalRelation, variables: Sequence[str] | None = None):
    names = _names(rel.arity, variables)
    by_pattern: dict = {}
    for w in enumerate_weak_orders(rel.arity):
        by_pattern.setdefault(w.partition(), []).append(w)
    present = []
    for part, ws in by_pattern.items():
        inside = [w for w in ws if w in rel]
        outside = [w for w in ws if w not in rel]
        if inside and outside:
            return NotDefinable("equality", "membership depends on more than the equality pattern",
                                (inside[0], outside[0]))
        if inside:
            present.append(min(inside))
    if not present:
        return Certificate("equality", FALSE_TEXT)
    if len(present) == len(by_pattern):
        return Certificate("equality", TRUE_TEXT)
    present.sort(key=lambda w: (-w.blocks, w))
    present.sort(key=lambda w: w.blocks)
    parts = tuple(_pattern_text(w, names) for w in present)
    text = parts[0] if len(parts) == 1 else " | ".join(f"({p})" if "&" in p else p for p in parts)
    return Certificate("equality", text, parts)


# -- guarded Ord-Horn ---------------------------------------------------------------

@dataclass(frozen=True)
class Basic:
    """x=y, x<=y, a disjunction of disequalities, or the guarded-< clause.

    The guarded-< clause is (x!=a for a in left) | x<y | (y!=b for b in right).
    """
    kind: str
    x: int = -1
    y: int = -1
    pairs: tuple[tuple[int, int], ...] = ()
    left: tuple[int, ...] = ()
    right: tuple[int, ...] = ()

    def mask(self, am: AtomMasks) -> int:
        if self.kind == "eq":
            return am.eq[self.x, self.y]
        if self.kind == "le":
            return am.le(self.x, self.y)
        if self.kind == "ne":
            return am.ne_any(self.pairs)
        m = am.lt[self.x, self.y]
        m |= am.ne_any((self.x, a) for a in self.left)
        m |= am.ne_any((self.y, b) for b in self.right)
        return m

    def text(self, names: Sequence[str]) -> str:
        if self.kind == "eq":
            return f"{names[self.x]}={names[self.y]}"
        if self.kind == "le":
            return f"{names[self.x]}<={names[self.y]}"
        if self.kind == "ne":
            return " | ".join(f"{names[i]}!={names[j]}" for i, j in self.pairs)
        parts = [f"{names[self.x]}!={names[a]}" for a in self.left]
        parts.append(f"{names[self.x]}<{names[self.y]}")
        parts += [f"{names[self.y]}!={names[b]}" for b in self.right]
        return " | ".join(parts)

    def size(self) -> int:
        return {"eq": 1, "le": 1}.get(self.kind, len(self.pairs) or 1 + len(self.left) + len(self.right))


@dataclass(frozen=True)
class Conj:
    parts: tuple["GOHFormula", ...]

    def text(self, names: Sequence[str]) -> str:
        if not self.parts:
            return TRUE_TEXT
        return " & ".join(_goh_wrap(p, names) for p in self.parts)


@dataclass(frozen=True)
class Guard:
    pairs: tuple[tuple[int, int], ...]
    inner: "GOHFormula"

    def text(self, names: Sequence[str]) -> str:
        les = [f"{names[i]}<={names[j]}" for i, j in self.pairs]
        nes = [f"{names[i]}!={names[j]}" for i, j in self.pairs]
        inner = self.inner.text(names)
        if isinstance(self.inner, Conj) and len(self.inner.parts) > 1:
            inner = f"({inner})"
        return " & ".join(les + [f"({' | '.join(nes + [inner])})"])


GOHFormula = Union[Basic, Conj, Guard]


def _goh_wrap(p, names) -> str:
    s = p.text(names)
    if isinstance(p, Basic) and p.kind in ("ne", "lt") and " | " in s:
        return f"({s})"
    return s


def goh_mask(g, am: AtomMasks) -> int:
    if isinstance(g, Basic):
        return g.mask(am)
    if isinstance(g, Conj):
        m = am.full
        for p in g.parts:
            m &= goh_mask(p, am)
        return m
    inner = goh_mask(g.inner, am)
    return am.le_all(g.pairs) & (am.ne_any(g.pairs) | inner)


def _goh_size(g) -> int:
    if isinstance(g, Basic):
        return g.size()
    if isinstance(g, Conj):
        return sum(_goh_size(p) for p in g.parts)
    return 2 * len(g.pairs) + _goh_size(g.inner)


def _subsets(items: Sequence[int]) -> Iterable[tuple[int, ...]]:
    for k in range(len(items) + 1):
        yield from combinations(items, k)


class _GOHSearch:
    def __init__(self, n: int, depth: int, guard_pairs: int):
        self.n = n
        self.am = atom_masks(n)
        self.depth = depth
        self.guard_pairs = guard_pairs
        self.memo: dict = {}

    def basic_units(self, r: int) -> list[tuple[int, Basic]]:
        am, n = self.am, self.n
        out = []
        for i, j in _unordered_pairs(n):
            if r & ~am.eq[i, j] == 0:
                out.append(Basic("eq", i, j))
        for i in range(n):
            for j in range(n):
                if i != j and r & ~am.le(i, j) == 0:
                    out.append(Basic("le", i, j))
        for d in _minimal_hitting(_unordered_pairs(n), am.ne_any, r):
            if d:
                out.append(Basic("ne", pairs=tuple(d)))
        for x in range(n):
            for y in range(n):
                if x == y:
                    continue
                others = [v for v in range(n) if v not in (x, y)]
                kept: list[tuple[frozenset, frozenset]] = []
                todo = r & ~am.lt[x, y]
                for left in _subsets(others):
                    lm = am.ne_any((x, a) for a in left)
                    for right in _subsets(others):
                        if any(kl <= set(left) and kr <= set(right) for kl, kr in kept):
                            continue
                        if todo & ~(lm | am.ne_any((y, b) for b in right)) == 0:
                            kept.append((frozenset(left), frozenset(right)))
                            out.append(Basic("lt", x, y, left=left, right=right))
        return [(u.mask(am), u) for u in out]

    def units(self, r: int, d: int) -> list[tuple[int, object]]:
        """All entailed units at nesting depth <= d, tightest guarded ones only."""
        am = self.am
        units = self.basic_units(r)
        if d > 0:
            le_pairs = [(i, j) for i in range(self.n) for j in range(self.n)
                        if i != j and r & ~am.le(i, j) == 0 and r & ~am.eq[i, j] != 0]
            for k in range(1, min(self.guard_pairs, len(le_pairs)) + 1):
                for P in combinations(le_pairs, k):
                    sub = r & am.eq_all(P)
                    if sub == r:
                        continue
                    inner_mask, inner = self.best(sub, d - 1)
                    guard_region = am.le_all(P) & am.eq_all(P)
                    inner = self._prune_inner(inner, inner_mask, guard_region)
                    g = Guard(P, inner)
                    units.append((goh_mask(g, am), g))
        return units

    def _prune_inner(self, inner, inner_mask: int, region: int):
        if not isinstance(inner, Conj):
            return inner
        target = inner_mask & region
        parts = [(goh_mask(p, self.am) | ~region & self.am.full, p) for p in inner.parts]
        chosen = _greedy_cover(target | (~region & self.am.full), self.am.full, parts)
        if chosen is None:
            return inner
        return chosen[0] if len(chosen) == 1 else Conj(tuple(chosen))

    def best(self, r: int, d: int) -> tuple[int, object]:
        key = (r, d)
        if key in self.memo:
            return self.memo[key]
        am = self.am
        if r == 0 and self.n >= 2:
            res = (0, Conj((Basic("lt", 0, 1), Basic("lt", 1, 0))))
            self.memo[key] = res
            return res
        units = self.units(r, d)
        mask = am.full
        for m, _ in units:
            mask &= m
        units.sort(key=lambda t: (_goh_size(t[1]), repr(t[1])))
        chosen = _greedy_cover(mask, am.full, units) or []
        res = (mask, chosen[0] if len(chosen) == 1 else Conj(tuple(chosen)))
        self.memo[key] = res
        return res


@dataclass(frozen=True)
class GOHCertificate:
    formula_: object
    text: str
    depth: int

    def __bool__(self) -> bool:
        return True

    def formula(self) -> fm.Formula:
        return fm.parse(self.text)

    def to_json(self) -> dict:
        return {"kind": "goh", "definable": True, "certificate": self.text, "depth": self.depth}


@dataclass(frozen=True)
class GOHNotFound:
    depth: int
    clauses: int
    guard_pairs: int
    note: str = "no guarded Ord-Horn formula within the bounds; not a proof that none exists"

    def __bool__(self) -> bool:
        return False

    def to_json(self) -> dict:
        return {"kind": "goh", "definable": None, "bounded": True, "depth": self.depth,
                "clauses": self.clauses, "guard_pairs": self.guard_pairs, "note": self.note}


def _depth(g) -> int:
    if isinstance(g, Basic):
        return 0
    if isinstance(g, Conj):
        return max((_depth(p) for p in g.parts), default=0)
    return 1 + _depth(g.inner)


def goh_search(rel: TemporalRelation, depth: int = 2, clauses: int = 6, guard_pairs: int = 4,
               variables: Sequence[str] | None = None):
    """Guarded Ord-Horn definition of ``rel`` with nesting <= depth and <= clauses conjuncts.

    Within the depth and guard-size bounds the search is exact: it forms
    the tightest entailed unit for every guard and checks whether all
    entailed units together cut out ``rel``.
    """
    if not is_ordhorn(rel):
        raise NotOrdHornInput("GOH requires Ord-Horn input")
    names = _names(rel.arity, variables)
    n = rel.arity
    r = rel.mask()
    am = atom_masks(n)
    if r == am.full:
        return GOHCertificate(Conj(()), TRUE_TEXT, 0)
    if n == 1:
        return GOHNotFound(depth, clauses, guard_pairs)
    search = _GOHSearch(n, depth, guard_pairs)
    mask, g = search.best(r, depth)
    if mask != r:
        return GOHNotFound(depth, clauses, guard_pairs)
    parts = g.parts if isinstance(g, Conj) else (g,)
    if len(parts) > clauses:
        units = [(goh_mask(p, am), p) for p in search.units(r, depth)]
        smaller = _small_cover(r, am.full, units, clauses)
        if smaller is None:
            return GOHNotFound(depth, clauses, guard_pairs,
                               f"definable only with more than {clauses} conjuncts within the depth bound")
        parts = tuple(smaller)
        g = parts[0] if len(parts) == 1 else Conj(parts)
    text = g.text(names)
    return GOHCertificate(g, text, _depth(g))


def _small_cover(target: int, full: int, units, limit: int, budget: int = 200_000):
    tried = 0
    for k in range(1, limit + 1):
        for combo in combinations(units, k):
            tried += 1
            if tried > budget:
                return None
            m = full
            for um, _ in combo:
                m &= um
            if m == target:
                return [u for _, u in combo]
    return None


# -- GOH recognition ------------------------------------------------------------------

def _flatten(f, cls) -> list:
    if isinstance(f, cls):
        out = []
        for a in f.args:
            out.extend(_flatten(a, cls))
        return out
    return [f]


def _is_cmp(f, op: str | None = None) -> bool:
    return isinstance(f, fm.Atom) and (op is None or f.op == op)


def _basic_disjunction(ds: Sequence) -> bool:
    if not ds or not all(_is_cmp(d) for d in ds):
        return False
    if len(ds) == 1 and ds[0].op in ("=", "<="):
        return True
    if all(d.op == "!=" for d in ds):
        return True
    lts = [d for d in ds if d.op == "<"]
    if len(lts) != 1 or any(d.op not in ("!=", "<") for d in ds):
        return False
    x1, y1 = lts[0].lhs, lts[0].rhs
    for d in ds:
        if d.op == "!=" and x1 not in (d.lhs, d.rhs) and y1 not in (d.lhs, d.rhs):
            return False
    return True


def _same_pair(a, b) -> bool:
    return {a.lhs, a.rhs} == {b.lhs, b.rhs}


def _recognize(f) -> bool:
    if isinstance(f, fm.And):
        parts = _flatten(f, fm.And)
    else:
        parts = [f]
    les = [p for p in parts if _is_cmp(p, "<=")]
    for p in parts:
        if _basic_disjunction(_flatten(p, fm.Or)):
            continue
        if isinstance(p, fm.Or) and _guarded_disjunction(_flatten(p, fm.Or), les):
            continue
        return False
    return True


def _guarded_disjunction(ds: Sequence, les: Sequence) -> bool:
    nes = [k for k, d in enumerate(ds) if _is_cmp(d, "!=")]
    for m in range(1, len(les) + 1):
        for guard in combinations(les, m):
            used = []
            for g in guard:
                hit = next((k for k in nes if k not in used and _same_pair(ds[k], g)), None)
                if hit is None:
                    break
                used.append(hit)
            else:
                rest = [d for k, d in enumerate(ds) if k not in used]
                if not rest:
                    continue
                if len(rest) == 1 and _recognize(rest[0]):
                    return True
                if len(rest) > 1 and _basic_disjunction(rest):
                    return True
    return False


def goh_recognize(f) -> bool:
    """Whether ``f`` is literally an instance of the guarded Ord-Horn grammar."""
    if isinstance(f, str):
        if f.strip() == TRUE_TEXT:
            return True  # the empty conjunction
        f = fm.parse(f)
    if fm.has_quantifier(f):
        return False
    return _recognize(f)
