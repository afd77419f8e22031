"""Evaluation of quantified conjunctions of atoms over a temporal language.

Whether the matrix holds depends only on the weak order of the values
assigned so far, so a quantifier over Q ranges over the 2m+1 ways of
placing one more variable into the current weak order.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from . import formulas as fm
from .orders import WeakOrder, extensions, restrict
from .relations import Language, TemporalRelation

EXISTS, FORALL = "E", "A"


class InstanceError(ValueError):
    pass


@dataclass(frozen=True)
class QcspInstance:
    prefix: tuple[tuple[str, str], ...]
    atoms: tuple[fm.Formula, ...]

    def __post_init__(self):
        seen = set()
        for q, v in self.prefix:
            if q not in (EXISTS, FORALL):
                raise InstanceError(f"unknown quantifier {q!r}")
            if v in seen:
                raise InstanceError(f"variable {v!r} quantified twice")
            seen.add(v)
        for a in self.atoms:
            for v in fm.atom_vars(a):
                if v not in seen:
                    raise InstanceError(f"unbound matrix variable {v!r} in {fm.to_text(a)}")

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(v for _, v in self.prefix)

    def text(self) -> str:
        head = " ".join(f"{q} {v}." for q, v in self.prefix)
        body = " & ".join(fm.to_text(a) for a in self.atoms) if self.atoms else "true"
        return f"{head} {body}".strip()

    def existential_only(self) -> bool:
        return all(q == EXISTS for q, _ in self.prefix)


def parse_instance(text: str) -> QcspInstance:
    """``A x. E y. rel(x,y) & x<y``; the matrix must be a conjunction of atoms."""
    f = fm.parse(text)
    prefix, matrix = fm.split_prefix(f)
    atoms = fm.conjuncts(matrix)
    if atoms is None:
        raise InstanceError("the matrix must be a conjunction of atoms")
    return QcspInstance(tuple(prefix), tuple(atoms))


def load_instance(path: str | Path) -> QcspInstance:
    return parse_instance(Path(path).read_text())


def _resolved(instance: QcspInstance, language: Language) -> list[tuple[tuple[int, ...], TemporalRelation]]:
    pos = {v: i for i, v in enumerate(instance.variables)}
    out = []
    for a in instance.atoms:
        try:
            rel = language.resolve(a)
        except KeyError as e:
            raise InstanceError(str(e.args[0])) from None
        except ValueError as e:
            raise InstanceError(str(e)) from None
        out.append((tuple(pos[v] for v in fm.atom_vars(a)), rel))
    return out


class _Evaluator:
    def __init__(self, instance: QcspInstance, language: Language):
        self.quant = [q for q, _ in instance.prefix]
        self.n = len(self.quant)
        atoms = _resolved(instance, language)
        # atoms become checkable once their last variable is placed
        self.closing: list[list] = [[] for _ in range(self.n)]
        last_use = [-1] * self.n
        for args, rel in atoms:
            self.closing[max(args)].append((args, rel))
            for v in args:
                last_use[v] = max(last_use[v], max(args))
        # after placing variable k, keep the variables some later atom still needs
        self.keep_after = [tuple(v for v in range(k + 1) if last_use[v] > k) for k in range(self.n)]
        self.memo: dict = {}
        self.nodes = 0

    def run(self) -> bool:
        return self._eval(0, (), None)

    def _eval(self, k: int, vars_: tuple[int, ...], w: WeakOrder | None) -> bool:
        if k == self.n:
            return True
        key = (k, w.ranks if w is not None else ())
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        self.nodes += 1
        exists = self.quant[k] == EXISTS
        cur = vars_ + (k,)
        local = {v: i for i, v in enumerate(cur)}
        children = extensions(w) if w is not None else [WeakOrder((0,))]
        result = not exists
        for child in children:
            ok = all(child_in(child, [local[v] for v in args], rel) for args, rel in self.closing[k])
            if ok:
                keep = self.keep_after[k]
                nxt = restrict(child, [local[v] for v in keep]) if keep else None
                ok = self._eval(k + 1, keep, nxt)
            if exists and ok:
                result = True
                break
            if not exists and not ok:
                result = False
                break
        self.memo[key] = result
        return result


def child_in(w: WeakOrder, coords: Sequence[int], rel: TemporalRelation) -> bool:
    return restrict(w, coords) in rel


def evaluate(instance: QcspInstance, language: Language) -> bool:
    """Truth of the sentence in (Q; language), by memoized game-tree search."""
    return _Evaluator(instance, language).run()


def evaluate_with_stats(instance: QcspInstance, language: Language) -> tuple[bool, int]:
    ev = _Evaluator(instance, language)
    return ev.run(), ev.nodes


def evaluate_naive(instance: QcspInstance, language: Language) -> bool:
    """Reference evaluator: full weak orders, atoms checked only at the leaves."""
    atoms = _resolved(instance, language)
    quant = [q for q, _ in instance.prefix]
    n = len(quant)

    def rec(k: int, w: WeakOrder | None) -> bool:
        if k == n:
            return all(restrict(w, args) in rel for args, rel in atoms) if atoms else True
        children = extensions(w) if w is not None else [WeakOrder((0,))]
        if quant[k] == EXISTS:
            return any(rec(k + 1, c) for c in children)
        return all(rec(k + 1, c) for c in children)

    return rec(0, None)
