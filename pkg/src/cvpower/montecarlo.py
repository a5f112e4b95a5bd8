"""Monte Carlo campaign engine.

A scenario repeats one pipeline on freshly generated datasets and
aggregates the accuracy distribution, per-feature selection counts, and
model-confidence estimates.  Each repetition derives its own random
stream from (master_seed, scenario key, repetition index), so results are
independent of the number of workers and individual repetitions can be
reproduced in isolation.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .crossval import METHODS, assert_feasible, run_pipeline
from .curvefit import ExpFit, fit_quadratic, fit_two_term_exp
from .datagen import DatasetSpec, gen_gaussian_dataset
from .errors import NoCrossingError
from .logistic import DEFAULT_CONFIG, LogisticConfig
from .rng import stream_from
from .selection import SelectionConfig


@dataclass(frozen=True)
class McConfig:
    """One Monte Carlo scenario: a dataset spec, a pipeline, a budget."""

    spec: DatasetSpec
    method: str
    sel_cfg: SelectionConfig
    repetitions: int = 500
    alpha: float = 0.05
    beta: float = 0.2
    master_seed: int = 0
    k: int = 10
    train_fraction: float = 0.7
    test_fraction: float = 0.15
    model_config: LogisticConfig = DEFAULT_CONFIG

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method: {self.method!r}")
        if self.repetitions < 2:
            raise ValueError("repetitions must be >= 2")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must be in (0, 1)")
        if not 0.0 < self.beta < 1.0:
            raise ValueError("beta must be in (0, 1)")


def scenario_key(cfg: McConfig) -> str:
    """Canonical scenario identifier; excludes the repetition budget so a
    longer run extends (rather than reshuffles) a shorter one."""
    s = cfg.spec
    sel = cfg.sel_cfg
    sel_part = (
        f"fixed:{sel.l_target}" if sel.mode == "fixed_size"
        else f"auto:{sel.improvement_epsilon!r}"
    )
    return (
        f"method={cfg.method};n={s.n_per_class};m={s.m};l={s.l};d={s.d_effect!r};"
        f"gdb={s.gamma_db!r};gd={s.gamma_d!r};sel={sel_part};k={cfg.k};"
        f"tf={cfg.train_fraction!r};xf={cfg.test_fraction!r};"
        f"ridge={cfg.model_config.ridge!r};tol={cfg.model_config.tol!r}"
    )


@dataclass(frozen=True)
class McSummary:
    """Aggregated scenario output.

    ``h0_upper`` is set only for null scenarios (d_effect == 0) and
    ``ha_lower`` only for alternative scenarios; ``confidence`` maps
    (l, d) to the probability that at least d of the l selected features
    are truly discriminative.
    """

    accuracies: np.ndarray = field(repr=False)
    mean_acc: float
    std_acc: float
    h0_upper: float | None
    ha_lower: float | None
    confidence: dict[tuple[int, int], float]
    selection_counts: np.ndarray = field(repr=False)
    selected_sets: tuple[tuple[int, ...], ...] = field(repr=False, default=())


def ci_bound(accuracies, kind: str, level: float) -> float:
    """Empirical one-sided confidence bound of an accuracy distribution.

    ``h0_upper`` returns the (1 - level)*100 percentile (level = alpha);
    ``ha_lower`` returns the level*100 percentile (level = beta).
    Percentiles interpolate linearly between order statistics.
    """
    values = np.asarray(accuracies, dtype=np.float64)
    if values.size == 0:
        raise ValueError("empty accuracy vector")
    if not 0.0 < level < 1.0:
        raise ValueError("level must be in (0, 1)")
    if kind == "h0_upper":
        q = (1.0 - level) * 100.0
    elif kind == "ha_lower":
        q = level * 100.0
    else:
        raise ValueError(f"unknown bound kind: {kind!r}")
    return float(np.percentile(values, q, method="linear"))


def confidence_cld(selected_sets: Sequence[Sequence[int]], true_set, d: int) -> float:
    """Fraction of runs selecting at least d members of the true set."""
    true = frozenset(int(i) for i in true_set)
    sets = [frozenset(int(i) for i in s) for s in selected_sets]
    if not sets:
        raise ValueError("selected_sets must be non-empty")
    if d < 0 or d > len(true):
        raise ValueError(f"d={d} outside 0..|true_set|={len(true)}")
    for s in sets:
        if len(s) != len(true):
            raise ValueError(
                f"selected set of size {len(s)} does not match |true_set|={len(true)}"
            )
    if d == 0:
        return 1.0
    hits = sum(1 for s in sets if len(s & true) >= d)
    return hits / len(sets)


def _run_repetition(cfg: McConfig, rep: int) -> tuple[float, tuple[int, ...]]:
    rng = stream_from(cfg.master_seed, scenario_key(cfg), rep)
    ds = gen_gaussian_dataset(cfg.spec, rng)
    result = run_pipeline(
        ds,
        cfg.method,
        cfg.sel_cfg,
        rng,
        k=cfg.k,
        train_fraction=cfg.train_fraction,
        test_fraction=cfg.test_fraction,
        model_config=cfg.model_config,
    )
    return result.estimate.mean_acc, result.selected


def _repetition_star(args):
    return _run_repetition(*args)


def run_scenario(cfg: McConfig, workers: int = 1) -> McSummary:
    """Execute all repetitions of one scenario and aggregate.

    Repetitions are independent; with workers > 1 they run in separate
    processes.  Aggregation reduces per-repetition records in repetition
    order, so the summary is identical for any worker count.
    """
    assert_feasible(
        cfg.spec.n_negative,
        cfg.spec.n_positive,
        cfg.method,
        k=cfg.k,
        train_fraction=cfg.train_fraction,
        test_fraction=cfg.test_fraction,
    )
    reps = range(cfg.repetitions)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunk = max(1, cfg.repetitions // (workers * 8))
            records = list(
                pool.map(_repetition_star, ((cfg, r) for r in reps), chunksize=chunk)
            )
    else:
        records = [_run_repetition(cfg, r) for r in reps]

    accuracies = np.array([rec[0] for rec in records])
    selected_sets = tuple(rec[1] for rec in records)
    counts = np.zeros(cfg.spec.m, dtype=np.int64)
    for sel in selected_sets:
        counts[list(sel)] += 1

    confidence: dict[tuple[int, int], float] = {}
    l_true = cfg.spec.l
    if (
        cfg.sel_cfg.mode == "fixed_size"
        and l_true >= 1
        and cfg.sel_cfg.l_target == l_true
    ):
        true_set = range(l_true)
        for d in range(1, l_true + 1):
            confidence[(l_true, d)] = confidence_cld(selected_sets, true_set, d)

    return McSummary(
        accuracies=accuracies,
        mean_acc=float(np.mean(accuracies)),
        std_acc=float(np.std(accuracies)),
        h0_upper=ci_bound(accuracies, "h0_upper", cfg.alpha) if cfg.spec.d_effect == 0 else None,
        ha_lower=ci_bound(accuracies, "ha_lower", cfg.beta) if cfg.spec.d_effect > 0 else None,
        confidence=confidence,
        selection_counts=counts,
        selected_sets=selected_sets,
    )


@dataclass(frozen=True)
class CrossingResult:
    """Fitted-bound intersection: the empirical required sample size."""

    crossing_n: float
    n_values: tuple[float, ...]
    h0_upper: tuple[float, ...]
    ha_lower: tuple[float, ...]


def _fitted_predictor(n, values, fit_kind):
    if fit_kind == "two_term_exp":
        fit: ExpFit = fit_two_term_exp(n, values)
        return fit.predict
    if fit_kind == "quadratic":
        coeffs = fit_quadratic(n, values)
        return lambda xs: coeffs[0] + coeffs[1] * np.asarray(xs) + coeffs[2] * np.square(xs)
    raise ValueError(f"unknown fit kind: {fit_kind!r}")


def crossing_from_bounds(n_values, h0_upper, ha_lower, fit_kind: str = "two_term_exp") -> CrossingResult:
    """Fit both bound curves over n and locate their intersection.

    The difference (ha_lower - h0_upper) is scanned on a dense grid for
    its first sign change, then bisected.  No sign change raises
    NoCrossingError whose message states on which side the design sits.
    """
    n = np.asarray(n_values, dtype=np.float64)
    h0 = np.asarray(h0_upper, dtype=np.float64)
    ha = np.asarray(ha_lower, dtype=np.float64)
    if n.size < 4:
        raise ValueError("need at least 4 grid points spanning the crossing")
    if not np.all(np.diff(n) > 0):
        raise ValueError("n grid must be strictly increasing")
    if h0.shape != n.shape or ha.shape != n.shape:
        raise ValueError("bounds must match the n grid")

    h0_pred = _fitted_predictor(n, h0, fit_kind)
    ha_pred = _fitted_predictor(n, ha, fit_kind)

    def gap(xs):
        return np.asarray(ha_pred(xs)) - np.asarray(h0_pred(xs))

    dense = np.linspace(n[0], n[-1], 513)
    values = gap(dense)
    exact = np.flatnonzero(values == 0.0)
    if exact.size:
        crossing = float(dense[exact[0]])
    else:
        flips = np.flatnonzero(np.signbit(values[:-1]) != np.signbit(values[1:]))
        if flips.size == 0:
            if np.all(values > 0):
                raise NoCrossingError(
                    "alternative bound exceeds the null bound over the whole "
                    "grid: the design is powered at the minimum n evaluated"
                )
            raise NoCrossingError(
                "bound curves do not cross: the design is underpowered over "
                "the entire evaluated range"
            )
        lo = float(dense[flips[0]])
        hi = float(dense[flips[0] + 1])
        lo_negative = bool(np.signbit(values[flips[0]]))
        for _ in range(100):
            mid = 0.5 * (lo + hi)
            gm = float(gap(np.array([mid]))[0])
            if gm == 0.0:
                lo = hi = mid
                break
            if bool(np.signbit(gm)) == lo_negative:
                lo = mid
            else:
                hi = mid
        crossing = 0.5 * (lo + hi)
    return CrossingResult(
        crossing_n=crossing,
        n_values=tuple(float(v) for v in n),
        h0_upper=tuple(float(v) for v in h0),
        ha_lower=tuple(float(v) for v in ha),
    )


def required_n_empirical(
    cfg: McConfig,
    n_grid: Sequence[int],
    fit_kind: str = "two_term_exp",
    workers: int = 1,
    progress=None,
) -> CrossingResult:
    """Estimate the required sample size by paired null/alternative runs.

    For each n in the grid the scenario runs once with the configured
    effect size and once with the effect removed; the (1-alpha) null
    upper bounds and beta alternative lower bounds are fitted over n and
    intersected.  ``cfg.spec.d_effect`` must be positive.
    """
    if cfg.spec.d_effect <= 0:
        raise ValueError("cfg must describe the alternative (d_effect > 0)")
    ns = [int(v) for v in n_grid]
    if sorted(set(ns)) != ns:
        raise ValueError("n_grid must be strictly increasing")
    h0_vals = []
    ha_vals = []
    for n in ns:
        ha_cfg = replace(cfg, spec=replace(cfg.spec, n_per_class=n))
        h0_cfg = replace(cfg, spec=replace(cfg.spec, n_per_class=n, d_effect=0.0))
        h0_summary = run_scenario(h0_cfg, workers=workers)
        ha_summary = run_scenario(ha_cfg, workers=workers)
        h0_vals.append(h0_summary.h0_upper)
        ha_vals.append(ha_summary.ha_lower)
        if progress is not None:
            progress(n, h0_vals[-1], ha_vals[-1])
    return crossing_from_bounds(ns, h0_vals, ha_vals, fit_kind)


def accuracy_by_effect_size(
    base_spec: DatasetSpec,
    d_values: Sequence[float],
    method: str = "nested_kfold",
    repetitions: int = 500,
    master_seed: int = 0,
    k: int = 10,
    workers: int = 1,
) -> tuple[tuple[float, ...], tuple[float, ...]]:
    """Mean pipeline accuracy per effect size (one lookup-table cell)."""
    accs = []
    for d in d_values:
        cfg = McConfig(
            spec=replace(base_spec, d_effect=float(d)),
            method=method,
            sel_cfg=SelectionConfig.fixed(base_spec.l),
            repetitions=repetitions,
            master_seed=master_seed,
            k=k,
        )
        accs.append(run_scenario(cfg, workers=workers).mean_acc)
    return tuple(float(d) for d in d_values), tuple(accs)
