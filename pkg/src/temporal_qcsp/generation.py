"""Unary-operation classifier, bounded generation checks, and the su1 identity.

"f generates g" is undecidable here in general.  What is offered:

* ``classify_unary`` reads the class an operation falls into off its cell
  structure plus a few exact preservation tests;
* ``bounded_generation_check`` looks for a relation preserved by a set of
  operations but not by a target, exhaustively up to arity 3;
* ``identity_check_su1_from_ic_ci`` verifies ci(alpha(ic(t))) = su1(t) on
  concrete tuples, which is the constructive reason {ic, ci} yield su1.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .orders import WeakOrder, enumerate_weak_orders
from .polymorphisms import (
    CI, CONST, DEC, IC, INC, Operation, UnaryPiecewiseOp, get_op, placement_images,
    preserved_vector, preserves, preserves_mask, su, unary_images,
)
from .relations import TemporalRelation, catalog

VERDICTS = (
    "constant", "order-preserving", "generates-minus", "generates-cyc",
    "generates-minus-and-cyc", "generates-all-permutations", "generates-ic",
    "generates-ci", "generates-su1", "generates-peak",
)

# which argument each verdict rests on
BASIS = {
    "constant": "definition",
    "order-preserving": "definition",
    "generates-minus": "injective case (a): preserves Betw",
    "generates-cyc": "injective case (b): preserves Cycl",
    "generates-minus-and-cyc": "injective case (c): preserves Sep",
    "generates-all-permutations": "injective case (d)",
    "generates-ic": "infinite image, not injective",
    "generates-ci": "infinite image, not injective",
    "generates-su1": "finite image, two constant cells",
    "generates-peak": "finite image, isolated point",
}


@dataclass(frozen=True)
class UnaryClassification:
    verdict: str
    generated: tuple[str, ...]
    mixed: bool
    evidence: tuple[tuple[str, bool], ...]
    basis: str

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "generated": list(self.generated),
            "mixed": self.mixed,
            "basis": self.basis,
            "evidence": [{"fact": f, "holds": h} for f, h in self.evidence],
        }


_PAIR_LESS = WeakOrder((0, 1))
_PAIR_EQ = WeakOrder((0, 0))


def _collapse_pairs(op: UnaryPiecewiseOp) -> list[tuple[int, int]]:
    """Cell pairs (i <= j) holding some x < y with op(x) = op(y)."""
    out = []
    n = len(op.cells)
    for i in range(n):
        for j in range(i, n):
            if i == j and op.cells[i].point:
                continue
            if (0, 0) in placement_images(op, (i, j)):
                out.append((i, j))
    return out


def classify_unary(op: UnaryPiecewiseOp) -> UnaryClassification:
    evidence: list[tuple[str, bool]] = []
    images = unary_images(op, _PAIR_LESS)

    def done(verdict, generated=None, mixed=False):
        gen = tuple(generated) if generated else ((verdict.split("-", 1)[1],) if verdict.startswith("generates") else ())
        return UnaryClassification(verdict, gen, mixed, tuple(evidence), BASIS[verdict])

    is_const = images == frozenset({_PAIR_EQ})
    evidence.append(("constant", is_const))
    if is_const:
        return done("constant")
    order_pres = images == frozenset({_PAIR_LESS})
    evidence.append(("preserves <", order_pres))
    if order_pres:
        return done("order-preserving")
    injective = _PAIR_EQ not in images
    evidence.append(("injective", injective))

    if injective:
        facts = {k: preserves(op, catalog(k)) for k in ("betw", "cycl", "sep")}
        evidence.extend((f"preserves {k.capitalize()}", v) for k, v in facts.items())
        if facts["betw"]:
            return done("generates-minus")
        if facts["cycl"]:
            return done("generates-cyc")
        if facts["sep"]:
            return done("generates-minus-and-cyc", ("minus", "cyc"))
        return done("generates-all-permutations", ("all-permutations",))

    monotone = [k for k, c in enumerate(op.cells) if c.behavior in (INC, DEC)]
    evidence.append(("infinite image", bool(monotone)))
    if monotone:
        pairs = _collapse_pairs(op)
        gen: set[str] = set()
        if any(op.cells[k].behavior == DEC for k in monotone):
            evidence.append(("decreasing infinite region", True))
            gen.update(("minus", "ic", "ci"))
        for c in monotone:
            for i, j in pairs:
                if j > c and i >= c:
                    gen.add("ic")
                elif i < c and j <= c:
                    gen.add("ci")
                elif i < c < j:
                    gen.update(("ic", "ci"))
        if not gen:
            gen.add("ic")
        evidence.append(("collapse above an increasing region", "ic" in gen))
        evidence.append(("collapse below an increasing region", "ci" in gen))
        order = ("ic", "ci", "minus")
        generated = tuple(g for g in order if g in gen)
        verdict = "generates-ic" if "ic" in gen else "generates-ci"
        return done(verdict, generated, mixed=len(generated) > 1)

    interval_marks = {c.image for c in op.cells if c.behavior == CONST and not c.point}
    two = len(interval_marks) >= 2
    evidence.append(("two distinct landmarks on interval cells", two))
    if two:
        return done("generates-su1")
    return done("generates-peak")


# -- bounded generation -----------------------------------------------------------

@dataclass(frozen=True)
class GenerationReport:
    generated_from: tuple[str, ...]
    target: str
    arity: int
    counterexample: TemporalRelation | None
    exhaustive_up_to: int
    sampled: int = 0
    seed: int | None = None

    @property
    def found(self) -> bool:
        return self.counterexample is not None

    @property
    def outcome(self) -> str:
        return "counterexample" if self.found else f"no-counterexample-up-to-{self.arity}"

    def to_json(self) -> dict:
        return {
            "from": list(self.generated_from),
            "to": self.target,
            "arity": self.arity,
            "outcome": self.outcome,
            "counterexample": self.counterexample.to_json() if self.found else None,
            "exhaustive_up_to": self.exhaustive_up_to,
            "sampled": self.sampled,
            "seed": self.seed,
        }


def _as_op(op) -> Operation:
    return get_op(op) if isinstance(op, str) else op


def bounded_generation_check(ops: Iterable, target, k: int = 3, samples: int = 2000,
                             seed: int = 0) -> GenerationReport:
    """Least relation (by arity, then orbit mask) preserved by all ``ops`` but not ``target``.

    Exhaustive for arities up to min(k, 3); at arity 4 it tries ``samples``
    random orbit sets drawn with ``seed``.
    """
    ops = [_as_op(o) for o in ops]
    g = _as_op(target)
    names = tuple(o.name for o in ops)
    for n in range(1, min(k, 3) + 1):
        vecs = [preserved_vector(o, n) for o in ops]
        gv = preserved_vector(g, n)
        for mask in range(1, len(gv)):
            if not gv[mask] and all(v[mask] for v in vecs):
                rel = TemporalRelation.from_mask(n, mask, name=f"R{n}_{mask}")
                return GenerationReport(names, g.name, k, rel, n - 1)
    exhaustive = min(k, 3)
    if k < 4:
        return GenerationReport(names, g.name, k, None, exhaustive)
    rng = random.Random(seed)
    size = len(enumerate_weak_orders(4))
    for _ in range(samples):
        mask = rng.getrandbits(size) or 1
        if not preserves_mask(g, 4, mask) and all(preserves_mask(o, 4, mask) for o in ops):
            rel = TemporalRelation.from_mask(4, mask, name=f"R4_{mask}")
            return GenerationReport(names, g.name, k, rel, exhaustive, samples, seed)
    return GenerationReport(names, g.name, k, None, exhaustive, samples, seed)


def verify_counterexample(report: GenerationReport) -> bool:
    """Independent re-check of a reported counterexample orbit by orbit."""
    rel = report.counterexample
    if rel is None:
        return False
    ops_ok = all(preserves(_as_op(o), rel) for o in report.generated_from)
    return ops_ok and not preserves(_as_op(report.target), rel)


# -- su1 from ic and ci -------------------------------------------------------------

@dataclass(frozen=True)
class IdentityCase:
    tuple_: tuple[Fraction, ...]
    expected: tuple[Fraction, ...]
    obtained: tuple[Fraction, ...]
    alpha_knots: tuple[tuple[Fraction, Fraction], ...]

    @property
    def passed(self) -> bool:
        return self.expected == self.obtained


@dataclass(frozen=True)
class IdentityReport:
    cases: tuple[IdentityCase, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cases)

    @property
    def failures(self) -> list[IdentityCase]:
        return [c for c in self.cases if not c.passed]


class PiecewiseLinear:
    """Strictly increasing piecewise-linear bijection of Q given by knots.

    Outside the knot range it continues with slope 1.
    """

    def __init__(self, knots: Sequence[tuple[Fraction, Fraction]]):
        xs = [x for x, _ in knots]
        ys = [y for _, y in knots]
        if any(a >= b for a, b in zip(xs, xs[1:])) or any(a >= b for a, b in zip(ys, ys[1:])):
            raise ValueError("knots must be strictly increasing in both coordinates")
        self.knots = tuple((Fraction(x), Fraction(y)) for x, y in knots)

    def __call__(self, x) -> Fraction:
        x = Fraction(x)
        ks = self.knots
        if x <= ks[0][0]:
            return ks[0][1] + (x - ks[0][0])
        if x >= ks[-1][0]:
            return ks[-1][1] + (x - ks[-1][0])
        for (x0, y0), (x1, y1) in zip(ks, ks[1:]):
            if x0 <= x <= x1:
                return y0 + (y1 - y0) * (x - x0) / (x1 - x0)
        raise AssertionError("unreachable")


def alpha_for(values: Iterable) -> PiecewiseLinear:
    """Automorphism fixing everything up to the largest negative value and sending 0 to 1."""
    negs = [Fraction(v) for v in values if v < 0]
    m = max(negs) if negs else Fraction(-1)
    return PiecewiseLinear([(m, m), (Fraction(0), Fraction(1))])


def identity_check_su1_from_ic_ci(samples: Iterable[Sequence]) -> IdentityReport:
    su1 = su(1).numeric
    cases = []
    for t in samples:
        t = tuple(Fraction(x) for x in t)
        inner = tuple(IC.numeric(x) for x in t)
        alpha = alpha_for(inner)
        obtained = tuple(CI.numeric(alpha(x)) for x in inner)
        cases.append(IdentityCase(t, tuple(su1(x) for x in t), obtained, alpha.knots))
    return IdentityReport(tuple(cases))


def random_rational_tuples(count: int, max_len: int = 6, seed: int = 0) -> list[tuple[Fraction, ...]]:
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(1, max_len)
        out.append(tuple(Fraction(rng.randint(-20, 20), rng.randint(1, 6)) for _ in range(n)))
    return out
