"""Command-line entry point: ``tqcsp <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from . import formulas as fm
from .classifier import classify, explain
from .config import Bounds
from .definability import (
    NotOrdHornInput, equality_definition, goh_search, ordhorn_definition, positive_definition,
)
from .generation import bounded_generation_check, classify_unary
from .orders import ArityBoundExceeded, DEFAULT_MAX_ARITY
from .polymorphisms import (
    UnaryPiecewiseOp, concrete_witness, get_op, load_unary_op, preserves_language,
)
from .qcsp import InstanceError, evaluate, load_instance, parse_instance
from .relations import (
    Language, LanguageFileError, catalog, catalog_keys, load_language, pp_evaluate, pp_search,
    relation_of,
)

EXIT_INPUT = 2


class InputError(Exception):
    pass


def _parse_bounds(text: str | None, args) -> Bounds:
    values = {}
    keys = {"E": "max_exists", "A": "max_atoms", "D": "goh_depth", "C": "goh_clauses",
            "G": "goh_guard_pairs", "S": "max_states"}
    if text:
        for item in text.split(","):
            k, _, v = item.partition("=")
            k = k.strip()
            if k not in keys or not v.strip().isdigit():
                raise InputError(f"--bounds: cannot read {item!r}; expected e.g. E=2,A=4,D=2,C=6")
            values[keys[k]] = int(v)
    values["max_arity"] = args.max_arity
    values["seed"] = args.seed
    if getattr(args, "samples", None) is not None:
        values["samples"] = args.samples
    return Bounds(**values)


def _language(args) -> Language:
    if getattr(args, "language", None):
        try:
            return load_language(args.language, args.max_arity)
        except FileNotFoundError:
            raise InputError(f"{args.language}: no such file") from None
        except (LanguageFileError, ArityBoundExceeded) as exc:
            raise InputError(str(exc)) from None
    if getattr(args, "catalog", None):
        try:
            return Language.of(*[k.strip() for k in args.catalog.split(",")])
        except KeyError as exc:
            raise InputError(str(exc.args[0])) from None
    raise InputError("give --language FILE or --catalog KEYS")


def _relation(spec: str, args, language: Language | None = None):
    """A catalog key, a relation name in the language, a language file, or a formula."""
    if language is not None and spec in language:
        return language[spec]
    if spec.lower() in catalog_keys():
        return catalog(spec.lower())
    path = Path(spec)
    if path.suffix == ".json" or path.exists():
        try:
            lang = load_language(path, args.max_arity)
        except FileNotFoundError:
            raise InputError(f"{spec}: no such file") from None
        except (LanguageFileError, ArityBoundExceeded) as exc:
            raise InputError(str(exc)) from None
        if len(lang) != 1:
            raise InputError(f"{spec}: expected exactly one relation, found {len(lang)}")
        return lang.relations()[0]
    try:
        f = fm.parse(spec)
    except fm.FormulaSyntaxError as exc:
        raise InputError(f"relation {spec!r}: not a catalog key, file, or formula ({exc})") from None
    return relation_of(f, name=spec, max_arity=args.max_arity)


def _formula_vars(spec: str, rel) -> list[str] | None:
    if rel.name != spec:
        return None
    try:
        return fm.free_variables(fm.parse(spec))
    except fm.FormulaSyntaxError:
        return None


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=False))
    else:
        print(text)


# -- subcommands -------------------------------------------------------------------------

def cmd_classify(args) -> int:
    lang = _language(args)
    bounds = _parse_bounds(args.bounds, args)
    res = classify(lang, bounds)
    _emit(args, {"command": "classify", **res.to_json()}, explain(res))
    return res.exit_code


def _op(spec: str):
    if Path(spec).suffix == ".json" or Path(spec).exists():
        try:
            return load_unary_op(spec)
        except FileNotFoundError:
            raise InputError(f"{spec}: no such file") from None
        except (ValueError, KeyError, json.JSONDecodeError) as exc:
            raise InputError(f"{spec}: bad operation spec: {exc}") from None
    try:
        return get_op(spec)
    except KeyError as exc:
        raise InputError(str(exc.args[0])) from None


def cmd_poly_check(args) -> int:
    lang = _language(args)
    op = _op(args.op)
    v = preserves_language(op, lang)
    payload = {"command": "poly-check", "op": op.name, "preserved": v is None, "violation": None}
    if v is None:
        text = f"{op.name} preserves every relation of the language"
    else:
        payload["violation"] = v.to_json()
        text = f"{op.name} violates {v.relation}: {v.describe()}"
        wit = concrete_witness(op, v, lang[v.relation])
        if wit is not None:
            inputs, out = wit
            payload["violation"]["concrete"] = {
                "inputs": [[str(x) for x in t] for t in inputs], "output": [str(x) for x in out]}
            text += "\n  concrete: " + " ; ".join(
                "(" + ", ".join(str(x) for x in t) + ")" for t in inputs) + \
                " -> (" + ", ".join(str(x) for x in out) + ")"
    _emit(args, payload, text)
    return 0


def cmd_pp_eval(args) -> int:
    lang = _language(args)
    try:
        f = fm.parse(args.expr)
    except fm.FormulaSyntaxError as exc:
        raise InputError(f"--expr: {exc}") from None
    free = args.free.split(",") if args.free else None
    try:
        rel = pp_evaluate(f, lang, free, name="result")
    except (KeyError, ValueError) as exc:
        raise InputError(str(exc.args[0] if isinstance(exc, KeyError) else exc)) from None
    names = free or fm.free_variables(f)
    orbits = [w.to_json() for w in rel.sorted_orbits()]
    text = "\n".join([f"{len(orbits)} orbits over ({', '.join(names)}):"] + [f"  {o}" for o in orbits])
    _emit(args, {"command": "pp-eval", "variables": list(names), "arity": rel.arity,
                 "count": len(orbits), "orbits": orbits}, text)
    return 0


def cmd_pp_search(args) -> int:
    lang = _language(args)
    target = _relation(args.target, args)
    b = _parse_bounds(args.bounds, args)
    res = pp_search(target, lang, b.max_exists, b.max_atoms, b.max_states, b.max_arity)
    payload = {"command": "pp-search", "target": target.name, "found": bool(res),
               "definition": res.text() if res else None,
               "bounds": {"E": b.max_exists, "A": b.max_atoms}}
    if res:
        text = f"{target.name}(...) = {res.text()}"
    else:
        payload["note"] = res.note or "not found within bounds; not a proof of non-definability"
        text = f"no pp definition within E={b.max_exists}, A={b.max_atoms}"
    _emit(args, payload, text)
    return 0


def cmd_qcsp_eval(args) -> int:
    lang = _language(args)
    try:
        inst = load_instance(args.instance) if args.instance else parse_instance(args.expr)
    except FileNotFoundError:
        raise InputError(f"{args.instance}: no such file") from None
    except (fm.FormulaSyntaxError, InstanceError) as exc:
        raise InputError(str(exc)) from None
    try:
        value = evaluate(inst, lang)
    except InstanceError as exc:
        raise InputError(str(exc)) from None
    _emit(args, {"command": "qcsp-eval", "instance": inst.text(), "value": value},
          "true" if value else "false")
    return 0


def cmd_define(args) -> int:
    lang = _language(args) if (args.language or args.catalog) else None
    rel = _relation(args.relation, args, lang)
    b = _parse_bounds(args.bounds, args)
    # a relation given as a formula keeps its own variable names in the certificate
    names = _formula_vars(args.relation, rel)
    if args.kind == "oh":
        res = ordhorn_definition(rel, names)
    elif args.kind == "positive":
        res = positive_definition(rel, names)
    elif args.kind == "equality":
        res = equality_definition(rel, names)
    else:
        try:
            res = goh_search(rel, b.goh_depth, b.goh_clauses, b.goh_guard_pairs, names)
        except NotOrdHornInput as exc:
            raise InputError(str(exc)) from None
    payload = {"command": "define", "relation": rel.name, **res.to_json()}
    if res:
        text = f"{args.kind} definition: {res.text}"
    elif args.kind == "goh":
        text = f"goh: {res.note}"
    else:
        wit = ", ".join(str(w.to_json()) for w in res.witness)
        text = f"not {args.kind}-definable: {res.reason}" + (f" (witness {wit})" if wit else "")
    _emit(args, payload, text)
    return 0


def cmd_unary_classify(args) -> int:
    op = _op(args.op)
    if not isinstance(op, UnaryPiecewiseOp):
        raise InputError(f"{op.name} is not unary")
    res = classify_unary(op)
    lines = [f"{op.name}: {res.verdict}" + (" (mixed)" if res.mixed else ""),
             f"  generates: {', '.join(res.generated) or '-'}", f"  basis: {res.basis}"]
    lines += [f"  {f}: {'yes' if h else 'no'}" for f, h in res.evidence]
    _emit(args, {"command": "unary-classify", "op": op.name, **res.to_json()}, "\n".join(lines))
    return 0


def cmd_generate_check(args) -> int:
    ops = [_op(s.strip()) for s in args.from_.split(",")]
    target = _op(args.to)
    rep = bounded_generation_check(ops, target, args.arity, args.samples, args.seed)
    text = f"{{{', '.join(o.name for o in ops)}}} => {target.name}: {rep.outcome}"
    if rep.found:
        text += f"\n  counterexample orbits: {[w.to_json() for w in rep.counterexample.sorted_orbits()]}"
    if rep.sampled:
        text += f"\n  arity 4 sampled: {rep.sampled} relations, seed {rep.seed}"
    _emit(args, {"command": "generate-check", **rep.to_json()}, text)
    return 0


def cmd_catalog(args) -> int:
    rows = []
    for k in catalog_keys():
        r = catalog(k)
        rows.append({"key": k, "name": r.name, "arity": r.arity, "orbits": len(r)})
    w = max(len(r["name"]) for r in rows)
    text = "\n".join(f"{r['name']:<{w}}  arity {r['arity']}  {r['orbits']:>3} orbits" for r in rows)
    _emit(args, {"command": "catalog", "relations": rows}, text)
    return 0


def cmd_sweep(args) -> int:
    from .sweeps import SUITES, format_table, run_sweeps
    names = args.suite.split(",") if args.suite else None
    for n in names or ():
        if n not in SUITES:
            raise InputError(f"unknown suite {n!r}; known: {', '.join(SUITES)}")
    results = run_sweeps(names)
    _emit(args, {"command": "sweep", "suites": [r.to_json() for r in results]}, format_table(results))
    return 0 if all(r.ok for r in results) else 1


# -- parser ------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--parallel", type=int, default=1,
                        help="worker cap (engines currently run sequentially)")
    common.add_argument("--max-arity", type=int, default=DEFAULT_MAX_ARITY)

    lang = argparse.ArgumentParser(add_help=False)
    lang.add_argument("--language", help="language JSON file")
    lang.add_argument("--catalog", help="comma-separated catalog keys instead of a file")

    bounds = argparse.ArgumentParser(add_help=False)
    bounds.add_argument("--bounds", help="e.g. E=2,A=4,D=2,C=6 (also G=guard pairs, S=max states)")

    p = argparse.ArgumentParser(prog="tqcsp", description="Temporal constraint language toolkit")
    p.add_argument("--version", action="version", version=f"tqcsp {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("classify", parents=[common, lang, bounds], help="P / NP-hard / coNP-hard")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("poly-check", parents=[common, lang], help="does an operation preserve a language")
    s.add_argument("--op", required=True, help="catalog op name or piecewise spec file")
    s.set_defaults(func=cmd_poly_check)

    s = sub.add_parser("pp-eval", parents=[common, lang], help="orbits of a pp formula")
    s.add_argument("--expr", required=True)
    s.add_argument("--free", help="comma-separated order of free variables")
    s.set_defaults(func=cmd_pp_eval)

    s = sub.add_parser("pp-search", parents=[common, lang, bounds], help="bounded pp definition search")
    s.add_argument("--target", required=True, help="catalog key, relation file or formula")
    s.set_defaults(func=cmd_pp_search)

    s = sub.add_parser("qcsp-eval", parents=[common, lang], help="evaluate a quantified sentence")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--instance", help="file holding the sentence")
    g.add_argument("--expr", help="the sentence itself")
    s.set_defaults(func=cmd_qcsp_eval)

    s = sub.add_parser("define", parents=[common, lang, bounds], help="definability certificates")
    s.add_argument("--kind", required=True, choices=("oh", "positive", "equality", "goh"))
    s.add_argument("--relation", required=True, help="catalog key, name in --language, file or formula")
    s.set_defaults(func=cmd_define)

    s = sub.add_parser("unary-classify", parents=[common], help="class of a unary operation")
    s.add_argument("--op", required=True, help="piecewise spec file or catalog op name")
    s.set_defaults(func=cmd_unary_classify)

    s = sub.add_parser("generate-check", parents=[common], help="bounded generation test")
    s.add_argument("--from", dest="from_", required=True, help="comma-separated ops")
    s.add_argument("--to", required=True)
    s.add_argument("--arity", type=int, default=3)
    s.add_argument("--samples", type=int, default=2000)
    s.set_defaults(func=cmd_generate_check)

    s = sub.add_parser("catalog", parents=[common], help="list the built-in relations")
    s.set_defaults(func=cmd_catalog)

    s = sub.add_parser("sweep", parents=[common], help="exhaustive ternary law suites")
    s.add_argument("--suite", help="comma-separated subset of suites")
    s.set_defaults(func=cmd_sweep)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ArityBoundExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
