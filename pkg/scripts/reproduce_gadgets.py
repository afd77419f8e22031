"""Evaluate the I gadget over BetwC and CyclC and classify the catalog languages."""

import argparse
import json
import time
from dataclasses import asdict, dataclass

from temporal_qcsp import formulas as fm
from temporal_qcsp.classifier import classify
from temporal_qcsp.relations import Language, catalog, pp_evaluate

GADGET = "E u. E v. {r}(x,y,u) & {r}(x,y,v) & {r}(u,v,z)"
LANGUAGES = ("leq", "less", "i", "s", "betwc", "cyclc", "eqxor", "eqor3")


@dataclass(frozen=True)
class Row:
    language: str
    label: str
    branch: str
    flags: list
    seconds: float


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()

    for r in ("betwc", "cyclc"):
        got = pp_evaluate(fm.parse(GADGET.format(r=r)), Language.of(r), ["x", "y", "z"])
        print(f"gadget over {r}: {len(got)} orbits, equals I: {got == catalog('i')}")

    rows = []
    for key in LANGUAGES:
        t = time.perf_counter()
        res = classify(Language.of(key))
        rows.append(Row(key, res.label, res.branch, res.flags, round(time.perf_counter() - t, 4)))
    if args.json:
        print(json.dumps([asdict(r) for r in rows], indent=2))
        return
    print(f"\n{'language':<8}  {'label':<10}  branch  flags")
    for r in rows:
        print(f"{r.language:<8}  {r.label:<10}  {r.branch:<6}  {', '.join(r.flags)}")


if __name__ == "__main__":
    main()
