"""Operations on Q and exact preservation tests against orbit sets.

Unary operations are given piecewise: an ordered list of cells covering Q,
each an open interval (any number of values) or a single attainable point,
with a behaviour on that cell.  Monotone cells act as order isomorphisms of
the cell onto an open image interval whose ends are symbolic landmarks.
Binary operations are given by a comparison rule on argument pairs.

Preservation is decided at the orbit level: every way of placing an
orbit's blocks into the cells (a placement) is expanded into the output
patterns it can produce.  Concrete numeric forms of the catalog operations
exist only to cross-check this.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key, lru_cache
from itertools import combinations_with_replacement, product
from pathlib import Path
from typing import Callable, Iterator, Sequence, Union

from .orders import WeakOrder, enumerate_weak_orders, merge_chains, order_index
from .relations import Language, TemporalRelation

INC, DEC, CONST = "increasing", "decreasing", "constant"
NEG_INF, POS_INF = "-inf", "+inf"


@dataclass(frozen=True)
class Cell:
    behavior: str
    image: Union[str, tuple[str, str]]
    point: bool = False
    domain: str = ""

    def __post_init__(self):
        if self.behavior not in (INC, DEC, CONST):
            raise ValueError(f"unknown behavior {self.behavior!r}")
        if self.behavior == CONST and not isinstance(self.image, str):
            raise ValueError("a constant cell maps to a single landmark")
        if self.behavior != CONST:
            if self.point:
                raise ValueError("a point cell must be constant")
            if isinstance(self.image, str) or len(self.image) != 2:
                raise ValueError("a monotone cell needs an open image interval (lo, hi)")


@dataclass(frozen=True)
class UnaryPiecewiseOp:
    name: str
    cells: tuple[Cell, ...]
    landmarks: tuple[str, ...] = ()
    numeric: Callable | None = field(default=None, compare=False, repr=False)

    arity = 1

    def __post_init__(self):
        if not self.cells:
            raise ValueError("an operation needs at least one cell")
        if len(set(self.landmarks)) != len(self.landmarks):
            raise ValueError("landmarks must be distinct")
        for c in self.cells:
            if c.behavior == CONST:
                self._slot(c.image)
            else:
                lo, hi = self._slot(c.image[0]), self._slot(c.image[1])
                if lo >= hi:
                    raise ValueError(f"empty image interval {c.image}")
        for a, b in zip(self.cells, self.cells[1:]):
            if a.point and b.point:
                raise ValueError("two adjacent point cells leave no interval between them")

    def _slot(self, mark: str) -> int:
        # slots: gap0, L0, gap1, L1, ..., gap_r; landmark j sits at odd slot 2j+1
        if mark == NEG_INF:
            return -1
        if mark == POS_INF:
            return 2 * len(self.landmarks) + 1
        try:
            return 2 * self.landmarks.index(mark) + 1
        except ValueError:
            raise ValueError(f"unknown landmark {mark!r}") from None

    def __repr__(self) -> str:
        return f"UnaryPiecewiseOp({self.name})"


# -- unary images -----------------------------------------------------------------

def placements(op: UnaryPiecewiseOp, m: int) -> Iterator[tuple[int, ...]]:
    """Order-consistent assignments of ``m`` blocks to cells."""
    cells = op.cells

    def rec(b: int, start: int, acc: list[int]):
        if b == m:
            yield tuple(acc)
            return
        for c in range(start, len(cells)):
            if cells[c].point and acc and acc[-1] == c:
                continue
            acc.append(c)
            yield from rec(b + 1, c, acc)
            acc.pop()

    yield from rec(0, 0, [])


def _slot_runs(op: UnaryPiecewiseOp, cell: Cell, k: int) -> Iterator[tuple[int, ...]]:
    lo, hi = op._slot(cell.image[0]), op._slot(cell.image[1])
    for run in combinations_with_replacement(range(lo + 1, hi), k):
        if all(not (a == b and a % 2 == 1) for a, b in zip(run, run[1:])):
            yield run


def placement_images(op: UnaryPiecewiseOp, place: Sequence[int]) -> set[tuple[int, ...]]:
    """Output block patterns (ranks per input block) for one placement."""
    m = len(place)
    groups: dict[int, list[int]] = {}
    for b, c in enumerate(place):
        groups.setdefault(c, []).append(b)
    fixed: dict[int, list[int]] = {}
    mono: list[tuple[int, list[int]]] = []
    for c, blocks in groups.items():
        cell = op.cells[c]
        if cell.behavior == CONST:
            fixed.setdefault(op._slot(cell.image), []).extend(blocks)
        else:
            chain = blocks if cell.behavior == INC else blocks[::-1]
            mono.append((c, chain))

    out: set[tuple[int, ...]] = set()
    run_choices = [list(_slot_runs(op, op.cells[c], len(chain))) for c, chain in mono]
    for runs in product(*run_choices):
        at_mark: dict[int, list[int]] = {s: list(v) for s, v in fixed.items()}
        in_gap: dict[int, list[list[int]]] = {}
        for (c, chain), run in zip(mono, runs):
            per_gap: dict[int, list[int]] = {}
            for b, s in zip(chain, run):
                if s % 2:
                    at_mark.setdefault(s, []).append(b)
                else:
                    per_gap.setdefault(s, []).append(b)
            for s, sub in per_gap.items():
                in_gap.setdefault(s, []).append(sub)
        gap_slots = sorted(in_gap)
        for merged in product(*(list(merge_chains(in_gap[s])) for s in gap_slots)):
            seq: list[tuple[int, list[list[int]]]] = [(s, [v]) for s, v in at_mark.items()]
            seq += list(zip(gap_slots, merged))
            seq.sort(key=lambda t: t[0])
            ranks = [0] * m
            lvl = 0
            for _, levels in seq:
                for level in levels:
                    for b in level:
                        ranks[b] = lvl
                    lvl += 1
            out.add(tuple(ranks))
    return out


@lru_cache(maxsize=None)
def _unary_images_cached(op: UnaryPiecewiseOp, ranks: tuple[int, ...]) -> frozenset[WeakOrder]:
    m = max(ranks) + 1
    found = set()
    for place in placements(op, m):
        for block_ranks in placement_images(op, place):
            found.add(_compress(tuple(block_ranks[r] for r in ranks)))
    return frozenset(WeakOrder(r) for r in found)


def _compress(ranks: tuple[int, ...]) -> tuple[int, ...]:
    distinct = sorted(set(ranks))
    idx = {v: i for i, v in enumerate(distinct)}
    return tuple(idx[v] for v in ranks)


def unary_images(op: UnaryPiecewiseOp, w: WeakOrder) -> frozenset[WeakOrder]:
    """Orbits of op(t) over all tuples t in the orbit ``w``."""
    return _unary_images_cached(op, w.ranks)


# -- binary comparison-rule operations -----------------------------------------------

def _pp_le(p, q) -> bool:
    (a1, s1, b1), (a2, s2, b2) = p, q
    return (s1 <= 0 and a1 <= a2) or (s1 > 0 and s2 > 0 and b1 <= b2)


def _pp_cmp(p, q) -> int:
    le, ge = _pp_le(p, q), _pp_le(q, p)
    if le and ge:
        return 0
    if le:
        return -1
    if ge:
        return 1
    raise AssertionError(f"pp rule is not total on {p}, {q}")


def _lele_lt(p, q) -> bool:
    (a1, s1, b1), (a2, s2, b2) = p, q
    return (
        (s1 <= 0 and a1 < a2)
        or (s1 <= 0 and a1 == a2 and b1 < b2)
        or (s1 > 0 and s2 > 0 and b1 < b2)
        or (s1 > 0 and b1 == b2 and a1 < a2)
    )


def _lele_cmp(p, q) -> int:
    lt, gt = _lele_lt(p, q), _lele_lt(q, p)
    if lt and gt:
        raise AssertionError(f"lele rule is contradictory on {p}, {q}")
    return -1 if lt else 1 if gt else 0


_RULES = {"pp": _pp_cmp, "lele": _lele_cmp}


@dataclass(frozen=True)
class BinaryComparisonOp:
    name: str
    base: str
    dual: bool = False
    numeric: Callable | None = field(default=None, compare=False, repr=False)

    arity = 2

    def compare(self, p, q) -> int:
        """Sign of f(p) - f(q) for symbolic pairs ``(a_rank, a_sign, b_rank)``."""
        rule = _RULES[self.base]
        if not self.dual:
            return rule(p, q)
        # dual f(a, b) = -f(-a, -b): compare the negated pairs the other way round
        return rule(_neg(q), _neg(p))


def _neg(p):
    a, s, b = p
    return (-a, -s, -b)


def binary_placements(m: int) -> list[tuple[int, ...]]:
    """Sign of each first-argument block: threshold in a gap or on a block."""
    out = []
    for pos in range(2 * m + 1):
        if pos % 2:
            j = pos // 2
            out.append(tuple(-1 if k < j else 0 if k == j else 1 for k in range(m)))
        else:
            g = pos // 2
            out.append(tuple(-1 if k < g else 1 for k in range(m)))
    return out


def binary_image(op: BinaryComparisonOp, w1: WeakOrder, w2: WeakOrder,
                 signs: Sequence[int]) -> WeakOrder:
    pts = [(w1.ranks[i], signs[w1.ranks[i]], w2.ranks[i]) for i in range(w1.arity)]
    order = sorted(range(len(pts)), key=cmp_to_key(lambda i, j: op.compare(pts[i], pts[j])))
    ranks = [0] * len(pts)
    lvl = 0
    for k, i in enumerate(order):
        if k and op.compare(pts[order[k - 1]], pts[i]) != 0:
            lvl += 1
        ranks[i] = lvl
    return WeakOrder(tuple(ranks))


@lru_cache(maxsize=None)
def _binary_images_cached(op: BinaryComparisonOp, r1: tuple, r2: tuple):
    w1, w2 = WeakOrder(r1), WeakOrder(r2)
    return tuple((signs, binary_image(op, w1, w2, signs)) for signs in binary_placements(w1.blocks))


def binary_images(op: BinaryComparisonOp, w1: WeakOrder, w2: WeakOrder) -> frozenset[WeakOrder]:
    if w1.arity != w2.arity:
        raise ValueError("orbits of different arity")
    return frozenset(img for _, img in _binary_images_cached(op, w1.ranks, w2.ranks))


# -- preservation -----------------------------------------------------------------

Operation = Union[UnaryPiecewiseOp, BinaryComparisonOp]


@dataclass(frozen=True)
class Violation:
    op: str
    relation: str | None
    orbits: tuple[WeakOrder, ...]
    image: WeakOrder
    placement: tuple[int, ...] | None = None

    def describe(self) -> str:
        args = ", ".join(str(list(w.ranks)) for w in self.orbits)
        where = f" in {self.relation}" if self.relation else ""
        extra = f" (first-argument signs {list(self.placement)})" if self.placement else ""
        return f"{self.op}({args}) -> {list(self.image.ranks)} not{where}{extra}"

    def to_json(self) -> dict:
        return {
            "op": self.op,
            "relation": self.relation,
            "orbits": [w.to_json() for w in self.orbits],
            "image": self.image.to_json(),
            "placement": list(self.placement) if self.placement else None,
        }


def preserves_unary(op: UnaryPiecewiseOp, rel: TemporalRelation) -> Violation | None:
    """None when ``op`` preserves ``rel``, else the least witness."""
    for w in rel.sorted_orbits():
        for img in sorted(unary_images(op, w)):
            if img not in rel:
                return Violation(op.name, rel.name, (w,), img)
    return None


def preserves_binary(op: BinaryComparisonOp, rel: TemporalRelation) -> Violation | None:
    orbits = rel.sorted_orbits()
    for w1 in orbits:
        for w2 in orbits:
            for signs, img in _binary_images_cached(op, w1.ranks, w2.ranks):
                if img not in rel:
                    return Violation(op.name, rel.name, (w1, w2), img, signs)
    return None


def check(op: Operation, rel: TemporalRelation) -> Violation | None:
    if isinstance(op, BinaryComparisonOp):
        return preserves_binary(op, rel)
    return preserves_unary(op, rel)


def preserves(op: Operation, rel: TemporalRelation) -> bool:
    return check(op, rel) is None


def preserves_language(op: Operation, language: Language) -> Violation | None:
    for name, rel in language.items():
        v = check(op, rel)
        if v is not None:
            return Violation(v.op, name, v.orbits, v.image, v.placement)
    return None


def preserved_by_constant(rel: TemporalRelation) -> bool:
    return not rel.orbits or (0,) * rel.arity in rel._ranks


def closed_under_all_permutations(rel: TemporalRelation) -> bool:
    """Membership depends only on the equality pattern of an orbit."""
    by_partition: dict = {}
    for w in enumerate_weak_orders(rel.arity):
        by_partition.setdefault(w.partition(), []).append(w in rel)
    return all(all(v) or not any(v) for v in by_partition.values())


# -- bitmask tables for exhaustive sweeps ----------------------------------------------

@lru_cache(maxsize=None)
def image_table(op: Operation, n: int) -> tuple:
    """Per orbit index (unary) or orbit-pair index (binary): image bit mask."""
    ws = enumerate_weak_orders(n)
    idx = order_index(n)
    if isinstance(op, BinaryComparisonOp):
        table = []
        for w1 in ws:
            row = []
            for w2 in ws:
                m = 0
                for img in binary_images(op, w1, w2):
                    m |= 1 << idx[img.ranks]
                row.append(m)
            table.append(tuple(row))
        return tuple(table)
    out = []
    for w in ws:
        m = 0
        for img in unary_images(op, w):
            m |= 1 << idx[img.ranks]
        out.append(m)
    return tuple(out)


def _bits(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def preserves_mask(op: Operation, n: int, mask: int) -> bool:
    table = image_table(op, n)
    members = _bits(mask)
    if isinstance(op, BinaryComparisonOp):
        return all(table[i][j] & ~mask == 0 for i in members for j in members)
    return all(table[i] & ~mask == 0 for i in members)


# -- the catalog ------------------------------------------------------------------

def _c(behavior, image, point=False, domain=""):
    return Cell(behavior, image, point, domain)


def dual_unary(op: UnaryPiecewiseOp, name: str | None = None) -> UnaryPiecewiseOp:
    """The operation x -> -op(-x), built on the mirrored cell list."""
    flip = {NEG_INF: POS_INF, POS_INF: NEG_INF}
    marks = tuple(reversed(op.landmarks))

    def mirror(mark: str) -> str:
        return flip.get(mark, mark)

    cells = []
    for c in reversed(op.cells):
        if c.behavior == CONST:
            cells.append(Cell(CONST, c.image, c.point, c.domain))
        else:
            lo, hi = c.image
            cells.append(Cell(c.behavior, (mirror(hi), mirror(lo)), False, c.domain))
    num = None
    if op.numeric is not None:
        f = op.numeric
        num = lambda x, f=f: -f(-x)  # noqa: E731
    return UnaryPiecewiseOp(name or f"dual-{op.name}", tuple(cells), marks, num)


def _num_su(i: int):
    def f(x):
        if x < 0:
            return Fraction(0)
        for j in range(1, i):
            if x < j:
                return Fraction(j)
        return Fraction(i)
    return f


def su(i: int) -> UnaryPiecewiseOp:
    if i < 1:
        raise ValueError("su_i needs i >= 1")
    marks = tuple(str(j) for j in range(i + 1))
    cells = [_c(CONST, "0", domain="(-inf,0)")]
    for j in range(1, i):
        cells.append(_c(CONST, str(j), domain=f"[{j - 1},{j})"))
    cells.append(_c(CONST, str(i), domain=f"[{i - 1},+inf)"))
    return UnaryPiecewiseOp(f"su{i}", tuple(cells), marks, _num_su(i))


K = Fraction(1000)
CYC_CUT = Fraction(1, 4)
SWAP_CUTS = (Fraction(1, 4), Fraction(7, 4))


def _num_cyc(x):
    return x + K if x < CYC_CUT else x - K


def _num_swap(x):
    if x < SWAP_CUTS[0]:
        return x
    if x < SWAP_CUTS[1]:
        return x + K
    return x + K / 2


MINUS = UnaryPiecewiseOp("minus", (_c(DEC, (NEG_INF, POS_INF), domain="(-inf,+inf)"),), (),
                         lambda x: -x)
CYC = UnaryPiecewiseOp(
    "cyc",
    (_c(INC, ("pi", POS_INF), domain="(-inf,pi)"), _c(INC, (NEG_INF, "pi"), domain="(pi,+inf)")),
    ("pi",), _num_cyc)
# weakly increasing: identity below 0, flat on [0, 2], shifted down above 2
WAVE = UnaryPiecewiseOp(
    "wave",
    (_c(INC, (NEG_INF, "0"), domain="(-inf,0)"), _c(CONST, "0", domain="[0,2]"),
     _c(INC, ("0", POS_INF), domain="(2,+inf)")),
    ("0",), lambda x: x if x < 0 else (Fraction(0) if x <= 2 else x - 2))
PEAK = UnaryPiecewiseOp(
    "peak",
    (_c(CONST, "-1", domain="(-inf,0)"), _c(CONST, "1", point=True, domain="{0}"),
     _c(CONST, "-1", domain="(0,+inf)")),
    ("-1", "1"), lambda x: Fraction(1) if x == 0 else Fraction(-1))
IC = UnaryPiecewiseOp(
    "ic", (_c(INC, (NEG_INF, "0"), domain="(-inf,0)"), _c(CONST, "0", domain="[0,+inf)")),
    ("0",), lambda x: x if x < 0 else Fraction(0))
CI = UnaryPiecewiseOp(
    "ci", (_c(CONST, "0", domain="(-inf,0]"), _c(INC, ("0", POS_INF), domain="(0,+inf)")),
    ("0",), lambda x: Fraction(0) if x < 0 else x)
CONST_OP = UnaryPiecewiseOp("const", (_c(CONST, "c", domain="(-inf,+inf)"),), ("c",),
                            lambda x: Fraction(0))
SWAP = UnaryPiecewiseOp(
    "swap",
    (_c(INC, (NEG_INF, "a"), domain="(-inf,c1)"), _c(INC, ("b", POS_INF), domain="(c1,c2)"),
     _c(INC, ("a", "b"), domain="(c2,+inf)")),
    ("a", "b"), _num_swap)
IDENTITY = UnaryPiecewiseOp("id", (_c(INC, (NEG_INF, POS_INF), domain="(-inf,+inf)"),), (),
                            lambda x: x)


# integer constants keep the binary oracle on fast int arithmetic
PP_SHIFT = 1000
M = 100
BIG = 10 ** 6


def _num_pp(a, b):
    return a if a <= 0 else PP_SHIFT + b


def _num_lele(a, b):
    # lexicographic on (a, b) for a <= 0, on (b, a) above; valid for |a|, |b| < 50
    return a * M + b if a <= 0 else BIG + b * M + a


def _dual_num(f):
    return lambda a, b: -f(-a, -b)


PP = BinaryComparisonOp("pp", "pp", False, _num_pp)
DPP = BinaryComparisonOp("dpp", "pp", True, _dual_num(_num_pp))
LELE = BinaryComparisonOp("lele", "lele", False, _num_lele)
DLELE = BinaryComparisonOp("dlele", "lele", True, _dual_num(_num_lele))

MAX_SU = 5
CATALOG: dict[str, Operation] = {
    "minus": MINUS, "cyc": CYC, "wave": WAVE, "peak": PEAK,
    **{f"su{i}": su(i) for i in range(1, MAX_SU + 1)},
    "ic": IC, "ci": CI, "pp": PP, "dpp": DPP, "lele": LELE, "dlele": DLELE,
    "const": CONST_OP, "swap": SWAP, "id": IDENTITY,
}

DUAL_NAMES = {"minus": "minus", "ic": "ci", "ci": "ic", "pp": "dpp", "dpp": "pp",
              "lele": "dlele", "dlele": "lele", "const": "const", "id": "id"}


def get_op(name: str) -> Operation:
    key = name.lower()
    if key.startswith("su") and key[2:].isdigit():
        return CATALOG.get(key) or su(int(key[2:]))
    try:
        return CATALOG[key]
    except KeyError:
        raise KeyError(f"unknown operation {name!r}; known: {', '.join(CATALOG)}") from None


def dual_op(op: Operation) -> Operation:
    if isinstance(op, BinaryComparisonOp):
        return get_op(DUAL_NAMES[op.name])
    if op.name in DUAL_NAMES:
        return get_op(DUAL_NAMES[op.name])
    return dual_unary(op)


# -- numeric oracle ------------------------------------------------------------------

UNARY_GRID = tuple(Fraction(k, 2) for k in range(-8, 11))       # -4 .. 5 step 1/2
# four values on each side of 0, so every sign placement of four blocks occurs
BINARY_A_GRID = tuple(range(-4, 5))
BINARY_B_GRID = tuple(range(0, 4))


def _realizations(w: WeakOrder, grid: Sequence) -> Iterator[tuple]:
    from itertools import combinations
    for vals in combinations(grid, w.blocks):
        yield tuple(vals[r] for r in w.ranks)


def numeric_unary_images(op: UnaryPiecewiseOp, w: WeakOrder, grid=UNARY_GRID) -> set[WeakOrder]:
    from .orders import canonicalize
    f = op.numeric
    return {canonicalize([f(x) for x in t]) for t in _realizations(w, grid)}


def numeric_binary_images(op: BinaryComparisonOp, w1: WeakOrder, w2: WeakOrder,
                          a_grid=BINARY_A_GRID, b_grid=BINARY_B_GRID) -> set[WeakOrder]:
    from .orders import canonicalize
    f = op.numeric
    out = set()
    b_reps = list(_realizations(w2, b_grid))
    for t1 in _realizations(w1, a_grid):
        for t2 in b_reps:
            out.add(canonicalize([f(a, b) for a, b in zip(t1, t2)]))
    return out


def concrete_witness(op: Operation, v: Violation, rel: TemporalRelation):
    """Rational tuples realizing a violation, re-checked numerically.

    Returns ``(inputs, output)`` with ``output`` outside ``rel``, or None.
    """
    from .orders import canonicalize
    if op.numeric is None:
        return None
    if isinstance(op, BinaryComparisonOp):
        w1, w2 = v.orbits
        for t1 in _realizations(w1, BINARY_A_GRID):
            for t2 in _realizations(w2, BINARY_B_GRID):
                out = tuple(op.numeric(a, b) for a, b in zip(t1, t2))
                if canonicalize(out) == v.image and out not in rel:
                    return (t1, t2), out
        return None
    (w,) = v.orbits
    for t in _realizations(w, UNARY_GRID):
        out = tuple(op.numeric(x) for x in t)
        if canonicalize(out) == v.image and out not in rel:
            return (t,), out
    return None


# -- spec files -----------------------------------------------------------------------

_BEHAVIOR_ALIASES = {"inc": INC, "increasing": INC, "dec": DEC, "decreasing": DEC,
                     "const": CONST, "constant": CONST}


def unary_op_from_json(data: dict) -> UnaryPiecewiseOp:
    """Piecewise op from ``{"name", "landmarks", "cells": [...]}``.

    Each cell is ``{"from", "to", "behavior", "image"}`` for an open interval
    or ``{"at", "image"}`` for an attainable point; ``image`` is a landmark
    name for constant cells and ``[lo, hi]`` otherwise.
    """
    cells = []
    prev_to = None
    for k, c in enumerate(data["cells"]):
        if "at" in c:
            cells.append(Cell(CONST, c["image"], True, f"{{{c['at']}}}"))
            prev_to = c["at"]
            continue
        beh = _BEHAVIOR_ALIASES.get(c.get("behavior", ""), None)
        if beh is None:
            raise ValueError(f"cells[{k}]: unknown behavior {c.get('behavior')!r}")
        if prev_to is not None and c["from"] != prev_to:
            raise ValueError(f"cells[{k}]: starts at {c['from']} but previous cell ends at {prev_to}")
        img = c["image"] if beh == CONST else tuple(c["image"])
        cells.append(Cell(beh, img, False, f"({c['from']},{c['to']})"))
        prev_to = c["to"]
    return UnaryPiecewiseOp(data.get("name", "f"), tuple(cells), tuple(data.get("landmarks", ())))


def load_unary_op(path: str | Path) -> UnaryPiecewiseOp:
    return unary_op_from_json(json.loads(Path(path).read_text()))


@lru_cache(maxsize=None)
def preserved_vector(op: Operation, n: int) -> bytes:
    """Byte ``mask`` is 1 when ``op`` preserves the arity-``n`` relation ``mask``.

    Only practical for n <= 3 (2^13 relations).
    """
    if n > 3:
        raise ValueError("preserved_vector enumerates all relations; use n <= 3")
    size = len(enumerate_weak_orders(n))
    out = bytearray(1 << size)
    for mask in range(1 << size):
        out[mask] = preserves_mask(op, n, mask)
    return bytes(out)
