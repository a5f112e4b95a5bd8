"""Command-line front end.

Subcommands: ``campaign`` (run a Monte Carlo scenario grid from a config
file), ``compare-cv`` (four-way comparison on a user CSV), and the
deterministic calculators ``required-n``, ``recommended-n``,
``confidence``, ``adjust-unbalanced``, ``effective-d``.

Every calculator prints a human-readable answer followed by one JSON
line for machine consumption; warnings go to stderr.  Exit codes:
0 success, 2 usage/config error, 3 partial completion (skipped
scenarios).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
import warnings

from . import calculator
from .campaign import parse_campaign_config, run_campaign
from .comparison import compare_cv, load_user_dataset
from .errors import (
    ConfigError,
    CvPowerError,
    GridRangeError,
    InfeasibleSplitError,
    TargetUnreachableError,
    UserDataError,
)

DEFAULT_OUT_DIR = "cvpower_results"
OUT_DIR_ENV = "CVPOWER_OUT_DIR"


def _resolve_out_dir(flag_value, config_value=None):
    return flag_value or config_value or os.environ.get(OUT_DIR_ENV) or DEFAULT_OUT_DIR


def _load_model(path):
    if path is None:
        return None
    return calculator.PowerModel.load(path)


def _emit(human: str, payload: dict) -> None:
    print(human)
    print(json.dumps(payload, sort_keys=True))


def _forward_warnings(caught) -> None:
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)


def _cmd_required_n(args) -> int:
    model = _load_model(args.model)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        pairs = calculator.required_sample_size(args.d, args.m, args.l, model)
    _forward_warnings(caught)
    _emit(
        f"Required sample size: {pairs} pairs per class "
        f"(effect size {args.d:g}, {args.m} extracted / {args.l} selected features)",
        {"command": "required-n", "d": args.d, "m": args.m, "l": args.l, "pairs": pairs},
    )
    return 0


def _cmd_recommended_n(args) -> int:
    model = _load_model(args.model)
    pairs = calculator.recommended_sample_size(args.d, args.m, args.c, model)
    _emit(
        f"Recommended sample size: {pairs} pairs per class to select both true "
        f"features with {args.c:g}% probability (effect size {args.d:g}, "
        f"{args.m:g} extracted features)",
        {"command": "recommended-n", "d": args.d, "m": args.m, "target_c22": args.c, "pairs": pairs},
    )
    return 0


def _cmd_confidence(args) -> int:
    model = _load_model(args.model)
    value = calculator.nested_model_confidence(args.d, args.m, args.n, model)
    _emit(
        f"Model confidence: {value:g}% probability that both selected features "
        f"are correct (effect size {args.d:g}, {args.m:g} extracted features, "
        f"{args.n:g} pairs)",
        {"command": "confidence", "d": args.d, "m": args.m, "n": args.n, "c22_percent": value},
    )
    return 0


def _cmd_adjust_unbalanced(args) -> int:
    n_small, n_large = calculator.adjust_unbalanced(args.n_r, args.gamma_db)
    _emit(
        f"Unbalanced design: {n_small} samples in the smaller class and "
        f"{n_large} in the larger (average {args.n_r}, ratio {args.gamma_db:g})",
        {
            "command": "adjust-unbalanced",
            "n_r": args.n_r,
            "gamma_db": args.gamma_db,
            "n_small": n_small,
            "n_large": n_large,
        },
    )
    return 0


def _cmd_effective_d(args) -> int:
    value = calculator.effective_d(args.d, args.gamma_d)
    _emit(
        f"Effective effect size: {value:g} (features {args.d:g} and "
        f"{args.d * args.gamma_d:g}, averaged)",
        {"command": "effective-d", "d": args.d, "gamma_d": args.gamma_d, "effective_d": value},
    )
    return 0


def _cmd_campaign(args) -> int:
    config = parse_campaign_config(args.config)
    if args.reps is not None:
        config = dataclasses.replace(config, repetitions=args.reps)
    if args.seed is not None:
        config = dataclasses.replace(config, master_seed=args.seed)
    out_dir = _resolve_out_dir(args.out_dir, config.out_dir)
    workers = args.workers or config.workers or 1
    outcome = run_campaign(config, out_dir, workers=workers, strict=args.strict)
    print(f"summary: {outcome.summary_path}")
    if outcome.repetitions_path is not None:
        print(f"repetitions: {outcome.repetitions_path}")
    return 3 if outcome.skipped else 0


def _cmd_compare_cv(args) -> int:
    user_ds = load_user_dataset(args.csv, args.label_column)
    l_values = [int(part) for part in args.l_values.split(",") if part.strip()]
    report = compare_cv(
        user_ds,
        l_values,
        repeats=args.repeats,
        seed=args.seed,
        k=args.k,
        workers=args.workers or 1,
    )
    out_dir = _resolve_out_dir(args.out_dir)
    acc_path, sel_path = report.write(out_dir)
    for row in report.accuracy_rows():
        print(
            f"{row['method']:>16}  n_selected={row['n_selected']}  "
            f"mean_acc={float(row['mean_acc']):.4f}  std={float(row['std_acc']):.4f}"
        )
    print(f"accuracy table: {acc_path}")
    print(f"selection table: {sel_path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cvpower",
        description="Monte Carlo power analysis for cross-validated ML studies",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("campaign", help="run a Monte Carlo scenario grid from a config file")
    p.add_argument("--config", required=True, help="campaign configuration file")
    p.add_argument("--out-dir", default=None, help=f"output directory (env {OUT_DIR_ENV})")
    p.add_argument("--workers", type=int, default=None, help="parallel worker processes")
    p.add_argument("--seed", type=int, default=None, help="override the master seed")
    p.add_argument("--reps", type=int, default=None, help="override the repetition count")
    p.add_argument("--strict", action="store_true", help="fail instead of skipping infeasible scenarios")
    p.set_defaults(handler=_cmd_campaign)

    p = sub.add_parser("compare-cv", help="compare the four CV methods on a CSV dataset")
    p.add_argument("csv", help="CSV file with a header row")
    p.add_argument("--label-column", required=True, help="name of the binary label column")
    p.add_argument("--l-values", default="1,2,3,4", help="comma-separated model sizes to sweep")
    p.add_argument("--repeats", type=int, default=500, help="balancing/splitting repetitions")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--k", type=int, default=10, help="folds for the k-fold based methods")
    p.add_argument("--out-dir", default=None, help=f"output directory (env {OUT_DIR_ENV})")
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(handler=_cmd_compare_cv)

    p = sub.add_parser("required-n", help="pairs needed for a significant outcome (5% level, 80% power)")
    p.add_argument("--d", type=float, required=True, help="effect size of the discriminative features")
    p.add_argument("--m", type=int, required=True, help="number of extracted features")
    p.add_argument("--l", type=int, required=True, help="number of selected features")
    p.add_argument("--model", default=None, help="JSON power model replacing the shipped coefficients")
    p.set_defaults(handler=_cmd_required_n)

    p = sub.add_parser("recommended-n", help="pairs needed to reach a target model confidence")
    p.add_argument("--d", type=float, required=True)
    p.add_argument("--m", type=float, required=True)
    p.add_argument("--c", type=float, required=True, help="target confidence in percent")
    p.add_argument("--model", default=None)
    p.set_defaults(handler=_cmd_recommended_n)

    p = sub.add_parser("confidence", help="probability that both selected features are correct")
    p.add_argument("--d", type=float, required=True)
    p.add_argument("--m", type=float, required=True)
    p.add_argument("--n", type=float, required=True, help="pairs per class")
    p.add_argument("--model", default=None)
    p.set_defaults(handler=_cmd_confidence)

    p = sub.add_parser("adjust-unbalanced", help="split an average sample size across unbalanced classes")
    p.add_argument("--n-r", type=int, required=True, help="average per-class sample size")
    p.add_argument("--gamma-db", type=float, required=True, help="larger/smaller class ratio")
    p.set_defaults(handler=_cmd_adjust_unbalanced)

    p = sub.add_parser("effective-d", help="average effect size of two unequal features")
    p.add_argument("--d", type=float, required=True, help="smaller effect size")
    p.add_argument("--gamma-d", type=float, required=True, help="larger/smaller effect ratio")
    p.set_defaults(handler=_cmd_effective_d)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (
        ConfigError,
        UserDataError,
        GridRangeError,
        TargetUnreachableError,
        InfeasibleSplitError,
        ValueError,
        FileNotFoundError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CvPowerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
