"""Search every bundled instance for nontrivial cocycles and run the twist pipeline on each hit.

    python scripts/search_cocycles.py [name ...] [--save DIR]
"""

from __future__ import annotations

import argparse
import time
from pathlib import Path

from hopftwist.instances import catalog
from hopftwist.io import save_cocycle
from hopftwist.twist import find_cocycles, twisted_diagnostics, untwist_roundtrip, verify_main_theorem


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("names", nargs="*", help="instances to search (default: all)")
    ap.add_argument("--limit", type=int, default=8, help="stop after this many cocycles per instance")
    ap.add_argument("--save", type=Path, help="write each verified cocycle here as JSON")
    args = ap.parse_args()
    cat = catalog()
    for name in args.names or list(cat):
        B, A = cat[name]()
        t0 = time.perf_counter()
        found, rep = find_cocycles(B, limit=args.limit)
        print(f"{name}: {len(found)} cocycle(s) in {time.perf_counter() - t0:.1f} s")
        for line in rep.lines()[1:]:
            print("  " + line)
        for k, c in enumerate(found):
            mrep, T = verify_main_theorem(c, A)
            rt = untwist_roundtrip(c, A, T) if mrep.ok else None
            diag = twisted_diagnostics(T) if T is not None and T.antipode is not None else None
            print(f"  #{k}: {len(c.F_lift)} terms, main theorem {'pass' if mrep.ok else 'FAIL'}, "
                  f"round trip {'pass' if rt is not None and rt.ok else 'n/a' if rt is None else 'FAIL'}, "
                  f"coring diagnostic {'n/a' if diag is None else 'pass' if diag.ok else 'fails'}")
            if args.save is not None and mrep.ok:
                args.save.mkdir(parents=True, exist_ok=True)
                save_cocycle(args.save / f"{name}.found-{k}.json", c)


if __name__ == "__main__":
    main()
