"""Mutation suite per bundled instance: counts, detection rate, first failing check per mutant.

    python scripts/mutation_report.py [name ...] [--limit N] [--seed S]
"""

from __future__ import annotations

import argparse
import time

from hopftwist.instances import catalog
from hopftwist.mutation import run_mutation_suite


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("names", nargs="*", help="instances (default: all)")
    ap.add_argument("--limit", type=int, help="sample this many mutants per slot (default: all)")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    cat = catalog()
    worst = 1.0
    for name in args.names or list(cat):
        B, A = cat[name]()
        t0 = time.perf_counter()
        res = run_mutation_suite(B, A, limit=args.limit, seed=args.seed)
        worst = min(worst, res.rate)
        scope = "all" if args.limit is None else f"<= {args.limit} per slot"
        print(f"{name}: {res.detected}/{res.total} detected ({scope}), {time.perf_counter() - t0:.1f} s")
        for check, k in sorted(res.by_check.items(), key=lambda kv: -kv[1]):
            print(f"  {k:6d}  {check}")
        for w in res.survivors:
            print(f"  SURVIVOR {w}")
    raise SystemExit(0 if worst == 1.0 else 1)


if __name__ == "__main__":
    main()
