"""Complexity classification of dually-closed temporal languages.

The pipeline is a fixed decision tree over exact preservation tests.  Each
step appends a trail entry ``(check, outcome, anchor)``; the anchor names
the result that licenses the conclusion drawn at that step.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .config import Bounds, DEFAULT_BOUNDS
from .definability import goh_search, ordhorn_definition
from .polymorphisms import (
    CI, CYC, DLELE, DPP, IC, LELE, MINUS, PEAK, PP, WAVE, closed_under_all_permutations,
    preserved_by_constant, preserves_language, su,
)
from .relations import Language, catalog, dual_closure_report, pp_search

P, NP_HARD, CONP_HARD, INCONCLUSIVE = "P", "NP-hard", "coNP-hard", "inconclusive"
EXIT_CODES = {P: 0, NP_HARD: 10, CONP_HARD: 11, INCONCLUSIVE: 20}

DUAL_UNVERIFIED = "dual-closure-unverified"
GOH_BOUND = "goh-bound-conditional"

# anchors: the argument each conclusion rests on
A_DUAL = "dual-closure"
A_LLPP = "llppOH: lele/pp-preserved dually-closed languages are Ord-Horn"
A_OHALG = "OHalg: Ord-Horn iff preserved by lele and dlele"
A_DUALLYOH = "duallyOH: dually-closed Ord-Horn is in P iff guarded Ord-Horn, else coNP-hard"
A_CONST = "imported constant dichotomy: no constant polymorphism gives NP-hardness"
A_POSWAVE = "positivewave: positive iff preserved by wave"
A_POSFRONT = "positivefrontier: positive languages not preserved by pp or dpp are NP-hard"
A_SU = "su: preserved by su1 but not wave gives NP-hardness"
A_EQLANG = "equality language branch"
A_PEAK = "peakallperm: peak-preserved, not pattern-closed languages pp-define EqXor or some EqOr_n"
A_BETWC = "violBetwC: minus but not cyc preserved pp-defines BetwC"
A_CYCLC = "violCyclC: cyc but not minus preserved pp-defines CyclC"
A_I = "violI: minus and cyc preserved pp-defines S"
A_BETWCCONST = "violBetwCconst: no catalog op preserved pp-defines BetwC"

NP_GADGETS = ("eqxor", "eqor3", "eqor4", "eqor5")
CONP_GADGETS = ("i", "s")


class InternalInconsistency(AssertionError):
    pass


@dataclass(frozen=True)
class TrailStep:
    check: str
    outcome: str
    anchor: str = ""

    def to_json(self) -> dict:
        return {"check": self.check, "outcome": self.outcome, "anchor": self.anchor}


@dataclass
class ClassificationResult:
    label: str
    branch: str
    trail: list[TrailStep] = field(default_factory=list)
    certificates: dict[str, str] = field(default_factory=dict)
    basis: str = ""
    flags: list[str] = field(default_factory=list)
    bounds: Bounds = DEFAULT_BOUNDS
    certificate_kind: str = "GOH certificate"

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.label]

    @property
    def anchors(self) -> list[str]:
        return [s.anchor for s in self.trail if s.anchor]

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "branch": self.branch,
            "flags": list(self.flags),
            "basis": self.basis,
            "trail": [s.to_json() for s in self.trail],
            "certificates": dict(self.certificates),
            "certificate_kind": self.certificate_kind,
            "bounds": self.bounds.to_json(),
        }


def _verdict(v) -> str:
    return "preserved" if v is None else f"violated: {v.describe()}"


class _Run:
    def __init__(self, language: Language, bounds: Bounds):
        self.language = language
        self.bounds = bounds
        self.trail: list[TrailStep] = []
        self.flags: list[str] = []

    def note(self, check: str, outcome: str, anchor: str = "") -> None:
        self.trail.append(TrailStep(check, outcome, anchor))

    def finish(self, label: str, branch: str, basis: str, certificates=None) -> ClassificationResult:
        return ClassificationResult(label, branch, self.trail, dict(certificates or {}), basis,
                                    self.flags, self.bounds)

    def op(self, op) -> bool:
        v = preserves_language(op, self.language)
        self.note(op.name, _verdict(v))
        return v is None

    def goh_route(self, branch: str, oh_anchor: str) -> ClassificationResult | None:
        """Ord-Horn check, then GOH search per relation.  None if some relation is not OH."""
        b = self.bounds
        for name, rel in self.language.items():
            cert = ordhorn_definition(rel)
            if not cert:
                self.note(f"ordhorn_definition({name})", "not Ord-Horn", oh_anchor)
                return None
            self.note(f"ordhorn_definition({name})", cert.text, oh_anchor)
        certs = {}
        missing = []
        for name, rel in self.language.items():
            g = goh_search(rel, b.goh_depth, b.goh_clauses, b.goh_guard_pairs)
            if g:
                certs[name] = g.text
                self.note(f"goh_search({name})", g.text, A_DUALLYOH)
            else:
                missing.append(name)
                self.note(f"goh_search({name})",
                          f"not found within D={b.goh_depth}, C={b.goh_clauses}, guard pairs={b.goh_guard_pairs}",
                          A_DUALLYOH)
        if not missing:
            return self.finish(P, branch, "guarded Ord-Horn", certs)
        self.flags.append(GOH_BOUND)
        return self.finish(CONP_HARD, branch,
                           f"Ord-Horn but no guarded Ord-Horn definition within bounds for {', '.join(missing)}",
                           certs)


def classify(language: Language, bounds: Bounds = DEFAULT_BOUNDS) -> ClassificationResult:
    run = _Run(language, bounds)
    b = bounds

    # 1. dual closure
    report = dual_closure_report(language, b.max_exists, b.max_atoms, b.max_states)
    for e in report.entries:
        run.note(f"dual of {e.relation}", e.status + (f" ({e.witness})" if e.witness else ""), A_DUAL)
    closed = report.closed
    if not closed:
        run.flags.append(DUAL_UNVERIFIED)

    # 2. Ord-Horn side
    binary = [run.op(op) for op in (LELE, DLELE, PP, DPP)]
    if any(binary):
        anchor = A_OHALG if binary[0] and binary[1] else A_LLPP
        res = run.goh_route("2", anchor)
        if res is not None:
            return res
        if closed:
            raise InternalInconsistency(
                "a dually-closed language preserved by lele or pp failed the Ord-Horn test")
        run.note("Ord-Horn expectation", "fails without verified dual closure; continuing", A_LLPP)

    # 3. constants
    for name, rel in language.items():
        if not preserved_by_constant(rel):
            run.note("constant", f"violated by {name}", A_CONST)
            return run.finish(NP_HARD, "3", f"{name} is not preserved by constant operations")
    run.note("constant", "preserved", A_CONST)

    # 4. unary catalog
    su1 = run.op(su(1))
    ic = run.op(IC)
    ci = run.op(CI)
    if su1 or (ic and ci):
        if run.op(WAVE):
            run.note("positive", "preserved by wave", A_POSWAVE)
            run.note("pp, dpp", "violated (step 2)", A_POSFRONT)
            return run.finish(NP_HARD, "4a", "positive language not preserved by pp or dpp")
        run.note("wave", "violated", A_SU)
        return run.finish(NP_HARD, "4a", "preserved by su1-type operations but not by wave")

    pattern = all(closed_under_all_permutations(r) for r in language.relations())
    run.note("all permutations", "preserved" if pattern else "violated")
    if pattern:
        res = run.goh_route("4b", A_EQLANG)
        if res is not None:
            return res
        return _equality_gadgets(run)

    if run.op(PEAK):
        run.note("branch", "peak preserved, not pattern-closed", A_PEAK)
        return run.finish(NP_HARD, "4c", "pp-defines EqXor or some EqOr_n")
    minus = run.op(MINUS)
    cyc = run.op(CYC)
    if ic or ci:
        run.note("ic/ci", "only one of the pair preserved (requires a non-dually-closed input)")
    if minus and not cyc:
        run.note("branch", "minus only", A_BETWC)
        return run.finish(CONP_HARD, "4d", "pp-defines BetwC")
    if cyc and not minus:
        run.note("branch", "cyc only", A_CYCLC)
        return run.finish(CONP_HARD, "4e", "pp-defines CyclC")
    if minus and cyc:
        run.note("branch", "minus and cyc", A_I)
        return run.finish(CONP_HARD, "4f", "pp-defines S")
    run.note("branch", "no catalog operation", A_BETWCCONST)
    return run.finish(CONP_HARD, "4g", "pp-defines BetwC")


def _equality_gadgets(run: _Run) -> ClassificationResult:
    b = run.bounds
    for key in NP_GADGETS + CONP_GADGETS:
        target = catalog(key)
        found = pp_search(target, run.language, b.max_exists, b.max_atoms, b.max_states)
        if found:
            run.note(f"pp_search({target.name})", found.text(), A_EQLANG)
            label = NP_HARD if key in NP_GADGETS else CONP_HARD
            res = run.finish(label, "4b", f"pp-defines {target.name}", {target.name: found.text()})
            res.certificate_kind = "pp definition"
            return res
        run.note(f"pp_search({target.name})", f"not found within E={b.max_exists}, A={b.max_atoms}")
    return run.finish(INCONCLUSIVE, "4b",
                      f"equality language, not Ord-Horn, no hard gadget within E={b.max_exists}, A={b.max_atoms}")


def explain(result: ClassificationResult) -> str:
    lines = [f"label: {result.label}", f"branch: {result.branch}"]
    if DUAL_UNVERIFIED in result.flags:
        lines.append("WARNING: dual closure could not be verified; the classification assumes it")
    if GOH_BOUND in result.flags:
        lines.append("WARNING: coNP-hardness rests on a bounded guarded Ord-Horn search")
    if result.basis:
        lines.append(f"basis: {result.basis}")
    lines.append("trail:")
    for k, s in enumerate(result.trail, 1):
        tail = f"   [{s.anchor}]" if s.anchor else ""
        lines.append(f"  {k:2d}. {s.check}: {s.outcome}{tail}")
    if result.certificates:
        lines.append("certificates:")
        for name, text in result.certificates.items():
            lines.append(f"  {name}: {result.certificate_kind}: {text}")
    b = result.bounds
    lines.append(f"bounds: E={b.max_exists} A={b.max_atoms} D={b.goh_depth} C={b.goh_clauses} "
                 f"guard-pairs={b.goh_guard_pairs} arity<={b.max_arity}")
    return "\n".join(lines)
