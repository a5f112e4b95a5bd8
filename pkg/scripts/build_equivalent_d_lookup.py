#!/usr/bin/env python3
"""Build an accuracy-to-effect-size lookup table by Monte Carlo calibration.

For each requested (m, n) cell, runs the nested k-fold pipeline over a
grid of effect sizes and records the mean test accuracy.  The resulting
JSON lookup inverts accuracy back to the effect size of the Gaussian
reference problem (see cvpower.equivalent_cohens_d), which is how
non-Gaussian problems can be mapped onto the sample-size calculators.
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from cvpower.calculator import AccuracyLookup  # noqa: E402
from cvpower.datagen import DatasetSpec  # noqa: E402
from cvpower.montecarlo import accuracy_by_effect_size  # noqa: E402


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m", default="20", help="comma-separated feature-space sizes")
    ap.add_argument("--n", default="100", help="comma-separated per-class sizes")
    ap.add_argument("--d-grid", default="0.4,0.5,0.6,0.7,0.8,0.9,1.0,1.1,1.2,1.3,1.4")
    ap.add_argument("--l", type=int, default=2)
    ap.add_argument("--reps", type=int, default=500)
    ap.add_argument("--seed", type=int, default=20240817)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", default="results/equivalent_d_lookup.json")
    args = ap.parse_args()

    d_values = tuple(float(v) for v in args.d_grid.split(","))
    cells = {}
    for m in (int(v) for v in args.m.split(",")):
        for n in (int(v) for v in args.n.split(",")):
            print(f"calibrating cell m={m}, n={n} ...")
            ds, accs = accuracy_by_effect_size(
                DatasetSpec(n_per_class=n, m=m, l=args.l, d_effect=d_values[0]),
                d_values=d_values,
                repetitions=args.reps,
                master_seed=args.seed,
                workers=args.workers,
            )
            cells[(m, n)] = (ds, accs)
            for d, a in zip(ds, accs):
                print(f"  D={d:g}: accuracy={a:.4f}")

    lookup = AccuracyLookup(cells=cells)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(lookup.to_json() + "\n", encoding="utf-8")
    print(f"lookup written to {out}")


if __name__ == "__main__":
    main()
