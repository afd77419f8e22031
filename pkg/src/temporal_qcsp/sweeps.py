"""Exhaustive law suites over all 2^13 ternary relations."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .definability import equality_definition, ordhorn_definition, positive_definition
from .orders import enumerate_weak_orders
from .polymorphisms import (
    CI, DLELE, DPP, IC, LELE, PP, SWAP, WAVE, closed_under_all_permutations, preserved_vector, su,
)
from .relations import TemporalRelation, dual_relation

ARITY = 3


@dataclass
class SweepResult:
    name: str
    statement: str
    checked: int = 0
    counterexamples: list[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def to_json(self) -> dict:
        return {"suite": self.name, "statement": self.statement, "checked": self.checked,
                "counterexamples": len(self.counterexamples),
                "first_counterexamples": self.counterexamples[:5]}


def _all_masks(n: int = ARITY) -> range:
    return range(1 << len(enumerate_weak_orders(n)))


def _run(name: str, statement: str, law: Callable[[int], bool]) -> SweepResult:
    res = SweepResult(name, statement)
    for mask in _all_masks():
        res.checked += 1
        if not law(mask):
            res.counterexamples.append(mask)
    return res


def _rel(mask: int) -> TemporalRelation:
    return TemporalRelation.from_mask(ARITY, mask)


def sweep_ordhorn() -> SweepResult:
    lele, dlele = preserved_vector(LELE, ARITY), preserved_vector(DLELE, ARITY)
    return _run("ordhorn", "Ord-Horn definable <=> preserved by lele and dlele",
                lambda m: bool(ordhorn_definition(_rel(m))) == bool(lele[m] and dlele[m]))


def sweep_positive() -> SweepResult:
    wave = preserved_vector(WAVE, ARITY)
    return _run("positive", "up-closed (positive definable) <=> preserved by wave",
                lambda m: bool(positive_definition(_rel(m))) == bool(wave[m]))


def sweep_constants() -> SweepResult:
    ic, ci, su1 = (preserved_vector(op, ARITY) for op in (IC, CI, su(1)))
    return _run("ic-ci-su1", "preserved by ic and ci => preserved by su1",
                lambda m: not (ic[m] and ci[m]) or bool(su1[m]))


def sweep_equality() -> SweepResult:
    swap = preserved_vector(SWAP, ARITY)

    def law(m: int) -> bool:
        r = _rel(m)
        eq = bool(equality_definition(r))
        return eq == closed_under_all_permutations(r) == bool(swap[m])

    return _run("equality", "equality definable <=> pattern-closed <=> preserved by swap", law)


def sweep_selfdual_ordhorn() -> SweepResult:
    """Self-dual relations preserved by lele or pp must be Ord-Horn."""
    vecs = [preserved_vector(op, ARITY) for op in (LELE, DLELE, PP, DPP)]

    def law(m: int) -> bool:
        if not any(v[m] for v in vecs):
            return True
        r = _rel(m)
        if dual_relation(r).orbits != r.orbits:
            return True
        return bool(ordhorn_definition(r))

    return _run("selfdual-ordhorn", "self-dual and preserved by lele/dlele/pp/dpp => Ord-Horn", law)


SUITES: dict[str, Callable[[], SweepResult]] = {
    "ordhorn": sweep_ordhorn,
    "positive": sweep_positive,
    "constants": sweep_constants,
    "equality": sweep_equality,
    "selfdual-ordhorn": sweep_selfdual_ordhorn,
}


def run_sweeps(names=None) -> list[SweepResult]:
    return [SUITES[n]() for n in (names or SUITES)]


def format_table(results: list[SweepResult]) -> str:
    w = max(len(r.name) for r in results)
    lines = [f"{'suite':<{w}}  {'checked':>7}  {'violations':>10}  statement"]
    for r in results:
        lines.append(f"{r.name:<{w}}  {r.checked:>7}  {len(r.counterexamples):>10}  {r.statement}")
    return "\n".join(lines)
