"""Regenerate the bundled instance, cocycle and table files from the catalog."""

from __future__ import annotations

import argparse
from pathlib import Path

from hopftwist.instances import Z2, Z2xZ2, bundled_cocycles, catalog, pair_groupoid
from hopftwist.io import algebra_to_json, dumps, instance_to_json, cocycle_to_json
from hopftwist.algebra import matrix_algebra
from hopftwist.twist import Cocycle

DATA = Path(__file__).resolve().parent.parent / "src" / "hopftwist" / "data"


def slug(s: str) -> str:
    return "".join(ch if ch.isalnum() else "-" for ch in s.lower()).strip("-").replace("--", "-")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=DATA)
    args = ap.parse_args()
    for kind in ("instances", "cocycles", "tables"):
        (args.out / kind).mkdir(parents=True, exist_ok=True)
    for name, make in catalog().items():
        B, A = make()
        (args.out / "instances" / f"{name}.json").write_text(dumps(instance_to_json(B, A)))
        cocs = {"identity": Cocycle.identity(B), **bundled_cocycles(name, B)}
        for cname, c in cocs.items():
            (args.out / "cocycles" / f"{name}.{slug(cname)}.json").write_text(dumps(cocycle_to_json(c)))
    pg = pair_groupoid(2)
    tables = {
        "z2": {"kind": "group", "name": "Q[Z2]", "product": Z2.product, "identity": Z2.identity},
        "z2xz2": {"kind": "group", "name": "Q[Z2xZ2]", "product": Z2xZ2.product, "identity": Z2xZ2.identity},
        "groupoid2": {"kind": "groupoid", "name": "pair groupoid on 2 objects", "objects": pg.objects,
                      "morphisms": [list(m) for m in pg.morphisms], "product": pg.product,
                      "inverse": pg.inverse},
        "pair_m2": {"kind": "pair", "name": "pair algebroid over M2(Q)", "R": algebra_to_json(matrix_algebra(2))},
    }
    for name, t in tables.items():
        (args.out / "tables" / f"{name}.json").write_text(dumps(t))
    print(f"wrote bundled files under {args.out}")


if __name__ == "__main__":
    main()
