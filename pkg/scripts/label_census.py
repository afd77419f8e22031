"""Classify {R, dual R} for every ternary relation R and tally labels by branch."""

import argparse
import collections
import json
import time
from dataclasses import dataclass

from temporal_qcsp.classifier import classify
from temporal_qcsp.config import Bounds
from temporal_qcsp.relations import Language, TemporalRelation, dual_relation


@dataclass(frozen=True)
class CensusConfig:
    arity: int = 3
    bounds: Bounds = Bounds()


def census(cfg: CensusConfig) -> collections.Counter:
    tally: collections.Counter = collections.Counter()
    seen = set()
    for mask in range(1 << 13):
        r = TemporalRelation.from_mask(cfg.arity, mask, name="R")
        d = dual_relation(r)
        key = frozenset((mask, d.mask()))
        if key in seen:
            continue
        seen.add(key)
        lang = Language([("R", r)]) if d == r else Language([("R", r), ("D", d)])
        res = classify(lang, cfg.bounds)
        tally[(res.label, res.branch, ",".join(res.flags))] += 1
    return tally


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()
    t = time.perf_counter()
    tally = census(CensusConfig())
    if args.json:
        print(json.dumps([{"label": l, "branch": b, "flags": f, "count": c}
                          for (l, b, f), c in sorted(tally.items())], indent=2))
        return
    for (label, branch, flags), count in sorted(tally.items()):
        print(f"{label:<10} {branch:<3} {count:>5}  {flags}")
    print(f"{sum(tally.values())} languages in {time.perf_counter() - t:.1f}s")


if __name__ == "__main__":
    main()
