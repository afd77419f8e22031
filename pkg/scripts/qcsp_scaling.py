"""Memoized game-tree size on two families of alternating sentences.

``ladder``: A x_i. E y_i. leq(x_i,y_i) & leq(y_{i-1},y_i)   (true)
``between``: A x_i. E y_i. betwc(y_{i-1},x_i,y_i)           (true)
Each state keeps only y_{i-1}, so node counts grow linearly.
"""

import argparse
import time

from temporal_qcsp.qcsp import evaluate_naive, evaluate_with_stats, parse_instance
from temporal_qcsp.relations import Language


def sentence(family: str, k: int) -> str:
    prefix = " ".join(f"A x{i}. E y{i}." for i in range(k))
    atoms = []
    for i in range(k):
        if family == "ladder":
            atoms.append(f"leq(x{i},y{i})")
            if i:
                atoms.append(f"leq(y{i - 1},y{i})")
        elif i:
            atoms.append(f"betwc(y{i - 1},x{i},y{i})")
    return f"{prefix} {' & '.join(atoms) or 'x0=x0'}"


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--max-pairs", type=int, default=10)
    ap.add_argument("--naive-up-to", type=int, default=3, help="also time the unmemoized evaluator")
    args = ap.parse_args()
    lang = Language.of("leq", "betwc")
    print("family   vars  value  nodes  memo_s  naive_s")
    for family in ("ladder", "between"):
        for k in range(1, args.max_pairs + 1):
            inst = parse_instance(sentence(family, k))
            t = time.perf_counter()
            value, nodes = evaluate_with_stats(inst, lang)
            memo_s = time.perf_counter() - t
            naive_s = "-"
            if k <= args.naive_up_to:
                t = time.perf_counter()
                assert evaluate_naive(inst, lang) == value
                naive_s = f"{time.perf_counter() - t:.3f}"
            print(f"{family:<8} {2 * k:>4}  {str(value):<5}  {nodes:>5}  {memo_s:.3f}   {naive_s}")


if __name__ == "__main__":
    main()
