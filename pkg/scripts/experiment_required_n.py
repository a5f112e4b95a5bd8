#!/usr/bin/env python3
"""Empirical required sample size from the null/alternative bound crossing.

For one (effect size, m, l, method) setting, runs paired null and
alternative campaigns over an n grid, fits both bound curves, and reports
where the alternative's lower confidence bound overtakes the null's upper
bound: the smallest n with the requested significance and power.
"""

import argparse
import csv
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from cvpower.datagen import DatasetSpec  # noqa: E402
from cvpower.errors import NoCrossingError  # noqa: E402
from cvpower.montecarlo import McConfig, required_n_empirical  # noqa: E402
from cvpower.selection import SelectionConfig  # noqa: E402


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--d", type=float, default=0.6)
    ap.add_argument("--m", type=int, default=20)
    ap.add_argument("--l", type=int, default=2)
    ap.add_argument("--method", default="nested_kfold")
    ap.add_argument("--n-grid", default="25,50,75,100,125,150,175,200")
    ap.add_argument("--reps", type=int, default=500)
    ap.add_argument("--alpha", type=float, default=0.05)
    ap.add_argument("--beta", type=float, default=0.2)
    ap.add_argument("--fit", choices=("two_term_exp", "quadratic"), default="two_term_exp")
    ap.add_argument("--seed", type=int, default=20240817)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", default="results/required_n.csv")
    args = ap.parse_args()

    cfg = McConfig(
        spec=DatasetSpec(n_per_class=50, m=args.m, l=args.l, d_effect=args.d),
        method=args.method,
        sel_cfg=SelectionConfig.fixed(args.l),
        repetitions=args.reps,
        alpha=args.alpha,
        beta=args.beta,
        master_seed=args.seed,
    )
    grid = [int(v) for v in args.n_grid.split(",")]
    try:
        result = required_n_empirical(
            cfg, grid, fit_kind=args.fit, workers=args.workers,
            progress=lambda n, h0, ha: print(f"n={n}: h0_upper={h0:.4f} ha_lower={ha:.4f}"),
        )
    except NoCrossingError as exc:
        print(f"no crossing: {exc}")
        return 1

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["n", "h0_upper", "ha_lower"])
        for n, h0, ha in zip(result.n_values, result.h0_upper, result.ha_lower):
            writer.writerow([f"{n:g}", f"{h0:.17g}", f"{ha:.17g}"])
    print(f"required n (crossing): {result.crossing_n:.1f} pairs per class")
    print(f"bound table written to {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
