#!/usr/bin/env python3
"""Model confidence of the four CV methods versus sample size.

With two discriminative features among m, sweeps the per-class sample
size and reports how often each pipeline's final model contains at least
one / both true features (the confidence columns of the summary table).
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from cvpower.campaign import CampaignConfig, run_campaign  # noqa: E402


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--reps", type=int, default=500)
    ap.add_argument("--d", type=float, default=0.8, help="effect size of the true features")
    ap.add_argument("--m", default="20", help="comma-separated feature-space sizes")
    ap.add_argument("--n", default="50,100,150,200", help="comma-separated per-class sizes")
    ap.add_argument("--seed", type=int, default=20240817)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out-dir", default="results/confidence")
    args = ap.parse_args()

    config = CampaignConfig(
        n=tuple(int(v) for v in args.n.split(",")),
        m=tuple(int(v) for v in args.m.split(",")),
        l=(2,),
        d=(args.d,),
        method=("single_holdout", "kfold", "train_val_test", "nested_kfold"),
        repetitions=args.reps,
        master_seed=args.seed,
    )
    outcome = run_campaign(config, args.out_dir, workers=args.workers)
    print(f"summary written to {outcome.summary_path}")


if __name__ == "__main__":
    main()
