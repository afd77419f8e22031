"""Search bounds shared by the library entry points and the CLI."""

from __future__ import annotations

from dataclasses import asdict, dataclass

from .orders import DEFAULT_MAX_ARITY


@dataclass(frozen=True)
class Bounds:
    max_exists: int = 2          # E: existential variables in pp_search
    max_atoms: int = 4           # A: atoms in pp_search
    goh_depth: int = 2           # D: nesting depth of guarded units
    goh_clauses: int = 6         # C: top-level conjuncts of a GOH certificate
    goh_guard_pairs: int = 4     # largest guard tried per unit
    max_arity: int = DEFAULT_MAX_ARITY
    max_states: int = 200_000    # distinct conjunctions kept per pp_search
    seed: int = 0
    samples: int = 2000          # sampled generation checks above arity 3

    def to_json(self) -> dict:
        return asdict(self)


DEFAULT_BOUNDS = Bounds()
