#!/usr/bin/env python3
"""Genericity frequency survey across a list of degree shapes.

For each shape d, draws seeded random basepoint-free systems over GF(p) and
reports how often dim H1 == nd across the whole box, plus the first-syzygy
support histogram.  With --out, one JSON report and one per-degree CSV grid
are written per shape.  Reruns with the same seed are bitwise identical.
"""

import argparse
import pathlib

from bigres.exactcore import GF
from bigres.lab import ExperimentConfig, generic_report


def parse_shapes(text):
    shapes = []
    for part in text.split(";"):
        d1, d2 = part.split(",")
        shapes.append((int(d1), int(d2)))
    return shapes


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--shapes", default="1,1;1,2;1,3;1,5;2,2",
                    help="semicolon-separated d pairs, e.g. '1,2;2,2'")
    ap.add_argument("--trials", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--p", type=int, default=32003, help="prime modulus")
    ap.add_argument("--out", type=pathlib.Path,
                    help="directory for JSON reports and CSV grids")
    args = ap.parse_args()

    if args.out:
        args.out.mkdir(parents=True, exist_ok=True)
    for d in parse_shapes(args.shapes):
        cfg = ExperimentConfig(d, trials=args.trials, field=GF(args.p),
                               seed=args.seed)
        report = generic_report(cfg, collect_grid=bool(args.out))
        print(report.summary())
        print()
        if args.out:
            stem = f"survey_{d[0]}_{d[1]}"
            (args.out / f"{stem}.json").write_text(report.to_json() + "\n")
            report.write_csv(args.out / f"{stem}.csv")
            print(f"wrote {args.out / stem}.{{json,csv}}")


if __name__ == "__main__":
    main()
