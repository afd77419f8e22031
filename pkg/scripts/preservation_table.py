"""Which catalog operations preserve which catalog relations."""

import argparse

from temporal_qcsp.polymorphisms import CATALOG, check, concrete_witness
from temporal_qcsp.relations import catalog

RELATIONS = ("betw", "betwc", "cycl", "cyclc", "sep", "s", "i", "eqxor", "eqor3", "leq", "less", "eq")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--witnesses", action="store_true", help="print a rational witness per violation")
    args = ap.parse_args()

    ops = list(CATALOG.values())
    print("op      " + " ".join(f"{k:>6}" for k in RELATIONS))
    notes = []
    for op in ops:
        cells = []
        for key in RELATIONS:
            rel = catalog(key)
            v = check(op, rel)
            cells.append("yes" if v is None else "no")
            if v is not None and args.witnesses:
                wit = concrete_witness(op, v, rel)
                if wit:
                    ins = ", ".join("(" + ", ".join(str(x) for x in t) + ")" for t in wit[0])
                    notes.append(f"{op.name} on {key}: {ins} -> ({', '.join(str(x) for x in wit[1])})")
        print(f"{op.name:<7} " + " ".join(f"{c:>6}" for c in cells))
    for line in notes:
        print(line)


if __name__ == "__main__":
    main()
