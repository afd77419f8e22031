"""Run the exhaustive arity-3 law suites and print a summary table."""

import argparse
import json
import time

from temporal_qcsp.sweeps import SUITES, format_table, run_sweeps


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--suite", action="append", choices=list(SUITES))
    ap.add_argument("--out", help="write the JSON summary here")
    args = ap.parse_args()

    t = time.perf_counter()
    results = run_sweeps(args.suite)
    print(format_table(results))
    print(f"\n{time.perf_counter() - t:.1f}s")
    if args.out:
        with open(args.out, "w") as fh:
            json.dump([r.to_json() for r in results], fh, indent=2)


if __name__ == "__main__":
    main()
