"""The four cross-validation strategies and their selection pipelines.

Splits are stratified per class.  During forward selection the pipelines
draw a fresh partition from the run's stream for every candidate-subset
evaluation; only the structural splits (the reserved test set of
train_val_test, the outer folds of nested_kfold) are drawn once per run.
Re-partitioning per evaluation keeps any single split's noise from
steering consecutive selection steps, and it is what reproduces the
published bias, dispersion, and feature-recovery levels of these
pipelines.  (:func:`evaluate_cost` itself is deterministic: it takes an
explicit plan and is the single costing path the pipelines call.)

Pipelines:

* ``single_holdout`` -- stratified train/test splits; the selection cost
  is the candidate's test accuracy and the reported estimate is the
  winning subset's own test evaluation.
* ``kfold`` -- stratified k folds per evaluation; cost and estimate are
  the mean fold accuracy.
* ``train_val_test`` -- a reserved stratified test set; selection by
  k-fold over the remainder; the final model is retrained on the full
  remainder and scored once on the test set.
* ``nested_kfold`` -- an outer k-fold whose per-fold training portion
  runs its own inner k-fold selection; the outer test folds give the
  estimate and a consensus merges the per-fold feature sets.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .datagen import Dataset, round_half_up
from .errors import InfeasibleSplitError, ShapeError
from .logistic import DEFAULT_CONFIG, LogisticConfig
from .rng import child_entropy, stream_from
from .selection import SelectionConfig, SelectionResult, forward_select

METHODS = ("single_holdout", "kfold", "train_val_test", "nested_kfold")

TEST_MARK = -1  # assignment value of reserved test rows in a tvt plan

_STRATEGY_KIND = {"holdout": "holdout", "kfold": "kfold", "tvt_inner": "tvt"}


@dataclass(frozen=True)
class CvEstimate:
    """Accuracy estimate of one subset under one plan (population std)."""

    mean_acc: float
    std_acc: float
    per_split_acc: tuple[float, ...]

    @classmethod
    def from_accuracies(cls, accs: np.ndarray) -> "CvEstimate":
        return cls(
            mean_acc=float(np.mean(accs)),
            std_acc=float(np.std(accs)),
            per_split_acc=tuple(float(a) for a in accs),
        )


@dataclass(frozen=True)
class SplitPlan:
    """Per-sample partition labels plus precomputed train/eval row pairs.

    assignment semantics by kind: ``holdout`` 0=train 1=test; ``kfold``
    fold index; ``tvt`` TEST_MARK for reserved test rows, fold index for
    the train-validation pool.
    """

    kind: str
    assignment: np.ndarray
    n_folds: int
    _train_idx: np.ndarray = field(repr=False)
    _train_off: np.ndarray = field(repr=False)
    _eval_idx: np.ndarray = field(repr=False)
    _eval_off: np.ndarray = field(repr=False)

    @property
    def n_samples(self) -> int:
        return self.assignment.shape[0]

    def pair_rows(self) -> list[tuple[np.ndarray, np.ndarray]]:
        out = []
        for s in range(self._train_off.shape[0] - 1):
            out.append(
                (
                    self._train_idx[self._train_off[s]:self._train_off[s + 1]],
                    self._eval_idx[self._eval_off[s]:self._eval_off[s + 1]],
                )
            )
        return out


def _concat_pairs(pairs):
    train_idx = np.concatenate([p[0] for p in pairs]).astype(np.int64)
    eval_idx = np.concatenate([p[1] for p in pairs]).astype(np.int64)
    train_off = np.zeros(len(pairs) + 1, dtype=np.int64)
    eval_off = np.zeros(len(pairs) + 1, dtype=np.int64)
    for s, (tr, ev) in enumerate(pairs):
        train_off[s + 1] = train_off[s] + tr.shape[0]
        eval_off[s + 1] = eval_off[s] + ev.shape[0]
    return train_idx, train_off, eval_idx, eval_off


def _make_plan(kind: str, assignment: np.ndarray, n_folds: int) -> SplitPlan:
    if kind == "holdout":
        pairs = [(np.flatnonzero(assignment == 0), np.flatnonzero(assignment == 1))]
    elif kind == "kfold":
        pairs = [
            (np.flatnonzero(assignment != f), np.flatnonzero(assignment == f))
            for f in range(n_folds)
        ]
    elif kind == "tvt":
        pool = assignment != TEST_MARK
        pairs = [
            (np.flatnonzero(pool & (assignment != f)), np.flatnonzero(assignment == f))
            for f in range(n_folds)
        ]
    else:
        raise ValueError(f"unknown plan kind: {kind!r}")
    tr, tro, ev, evo = _concat_pairs(pairs)
    return SplitPlan(
        kind=kind,
        assignment=assignment,
        n_folds=n_folds,
        _train_idx=tr,
        _train_off=tro,
        _eval_idx=ev,
        _eval_off=evo,
    )


def split_holdout(dataset: Dataset, train_fraction: float, rng: np.random.Generator) -> SplitPlan:
    """Stratified two-way split; per-class train count = round(fraction * count)."""
    if not 0.0 < train_fraction < 1.0:
        raise ValueError("train_fraction must be in (0, 1)")
    assignment = np.empty(dataset.n_samples, dtype=np.int64)
    for label in (0, 1):
        idx = dataset.class_indices(label)
        if idx.size < 2:
            raise InfeasibleSplitError(f"class {label} has fewer than 2 samples")
        n_train = round_half_up(train_fraction * idx.size)
        if n_train < 1 or n_train >= idx.size:
            raise InfeasibleSplitError(
                f"train_fraction={train_fraction} leaves an empty partition for "
                f"class {label} ({idx.size} samples)"
            )
        perm = rng.permutation(idx)
        assignment[perm[:n_train]] = 0
        assignment[perm[n_train:]] = 1
    return _make_plan("holdout", assignment, 1)


def split_kfold(dataset: Dataset, k: int, rng: np.random.Generator) -> SplitPlan:
    """Stratified k folds; per-class fold sizes differ by at most one."""
    if k < 2:
        raise ValueError("k must be >= 2")
    assignment = np.empty(dataset.n_samples, dtype=np.int64)
    for label in (0, 1):
        idx = dataset.class_indices(label)
        if idx.size < k:
            raise InfeasibleSplitError(
                f"class {label} has {idx.size} samples, fewer than k={k}"
            )
        perm = rng.permutation(idx)
        for j, row in enumerate(perm):
            assignment[row] = j % k
    return _make_plan("kfold", assignment, k)


def split_train_val_test(
    dataset: Dataset, test_fraction: float, k: int, rng: np.random.Generator
) -> SplitPlan:
    """Reserve a stratified test set, then deal the remainder into k folds.

    Per-class test counts are round(test_fraction * class_count); the
    remainder forms the train-validation pool.
    """
    if not 0.0 < test_fraction < 1.0:
        raise ValueError("test_fraction must be in (0, 1)")
    if k < 2:
        raise ValueError("k must be >= 2")
    assignment = np.empty(dataset.n_samples, dtype=np.int64)
    for label in (0, 1):
        idx = dataset.class_indices(label)
        n_test = round_half_up(test_fraction * idx.size)
        n_pool = idx.size - n_test
        if n_test < 1:
            raise InfeasibleSplitError(
                f"test_fraction={test_fraction} reserves no class-{label} test samples"
            )
        if n_pool < k:
            raise InfeasibleSplitError(
                f"class {label} keeps {n_pool} train-validation samples, fewer than k={k}"
            )
        perm = rng.permutation(idx)
        for j in range(n_pool):
            assignment[perm[j]] = j % k
        assignment[perm[n_pool:]] = TEST_MARK
    return _make_plan("tvt", assignment, k)


def evaluate_cost(
    dataset: Dataset,
    feature_subset: Sequence[int],
    strategy: str,
    plan: SplitPlan,
    config: LogisticConfig = DEFAULT_CONFIG,
) -> CvEstimate:
    """Train on each pair's training rows (restricted to the subset) and
    aggregate the evaluation accuracies of the strategy's plan."""
    if strategy not in _STRATEGY_KIND:
        raise ValueError(f"unknown strategy: {strategy!r}")
    if _STRATEGY_KIND[strategy] != plan.kind:
        raise ShapeError(f"plan kind {plan.kind!r} incompatible with strategy {strategy!r}")
    if plan.n_samples != dataset.n_samples:
        raise ShapeError("plan was built for a dataset of different size")
    cols = np.asarray(feature_subset, dtype=np.int64)
    if cols.size == 0:
        raise ValueError("feature subset must be non-empty")
    if cols.size != len(set(cols.tolist())):
        raise ValueError("feature subset contains duplicates")
    if cols.min() < 0 or cols.max() >= dataset.n_features:
        raise ShapeError("feature index out of range")
    accs = _kernels.evaluate_subset(
        dataset.features,
        dataset.labels.astype(np.float64),
        cols,
        plan._train_idx,
        plan._train_off,
        plan._eval_idx,
        plan._eval_off,
        config.ridge,
        config.tol,
        config.max_iter,
    )
    return CvEstimate.from_accuracies(accs)


def _train_eval_accuracy(
    dataset: Dataset,
    train_rows: np.ndarray,
    eval_rows: np.ndarray,
    feature_subset: Sequence[int],
    config: LogisticConfig,
) -> float:
    """Fit once on train_rows and score eval_rows (same kernel as the costs)."""
    cols = np.asarray(feature_subset, dtype=np.int64)
    accs = _kernels.evaluate_subset(
        dataset.features,
        dataset.labels.astype(np.float64),
        cols,
        train_rows.astype(np.int64),
        np.array([0, train_rows.size], dtype=np.int64),
        eval_rows.astype(np.int64),
        np.array([0, eval_rows.size], dtype=np.int64),
        config.ridge,
        config.tol,
        config.max_iter,
    )
    return float(accs[0])


@dataclass(frozen=True)
class PipelineResult:
    """Outcome of one full selection pipeline.

    ``selected`` is in selection order; for nested_kfold it is the trace
    of the first outer fold that produced the consensus set.
    ``candidate_sets`` holds the per-outer-fold selections (nested only).
    """

    selected: tuple[int, ...]
    estimate: CvEstimate
    candidate_sets: tuple[tuple[int, ...], ...] = ()


def consensus_features(candidate_sets: Sequence[Iterable[int]]) -> tuple[int, ...]:
    """Pick the candidate set occurring most often (exact-set multiplicity).

    Ties break by the largest summed per-feature occurrence count across
    all candidates, then by the lexicographically smallest sorted index
    list.  Returns the winning set sorted ascending.
    """
    sets = [frozenset(int(i) for i in c) for c in candidate_sets]
    if not sets:
        raise ValueError("candidate_sets must be non-empty")
    sizes = {len(s) for s in sets}
    if len(sizes) != 1:
        raise ValueError(f"candidate sets have mixed cardinalities: {sorted(sizes)}")
    multiplicity = Counter(sets)
    feature_freq = Counter()
    for s in sets:
        feature_freq.update(s)
    ranked = sorted(
        multiplicity,
        key=lambda s: (-multiplicity[s], -sum(feature_freq[f] for f in s), tuple(sorted(s))),
    )
    return tuple(sorted(ranked[0]))


def assert_feasible(
    n_negative: int,
    n_positive: int,
    method: str,
    k: int = 10,
    train_fraction: float = 0.7,
    test_fraction: float = 0.15,
) -> None:
    """Raise InfeasibleSplitError if the method cannot split these counts."""
    if method not in METHODS:
        raise ValueError(f"unknown method: {method!r}")
    for label, c in (("negative", n_negative), ("positive", n_positive)):
        if method == "single_holdout":
            n_train = round_half_up(train_fraction * c)
            if c < 2 or n_train < 1 or n_train >= c:
                raise InfeasibleSplitError(
                    f"single_holdout infeasible for {label} class of {c} samples "
                    f"at train_fraction={train_fraction}"
                )
        elif method == "kfold":
            if c < k:
                raise InfeasibleSplitError(
                    f"kfold needs >= {k} samples per class, {label} class has {c}"
                )
        elif method == "train_val_test":
            n_test = round_half_up(test_fraction * c)
            n_pool = c - n_test
            if n_test < 1 or n_pool < k:
                raise InfeasibleSplitError(
                    f"train_val_test infeasible for {label} class of {c} samples "
                    f"(pool {n_pool}, k={k}, test_fraction={test_fraction})"
                )
        else:  # nested_kfold
            if c < k:
                raise InfeasibleSplitError(
                    f"nested_kfold needs >= {k} samples per class, {label} class has {c}"
                )
            worst_pool = c - math.ceil(c / k)
            if worst_pool < k:
                raise InfeasibleSplitError(
                    f"nested_kfold {label}-class training portion can shrink to "
                    f"{worst_pool} samples, fewer than the inner k={k}"
                )


class _RecordingCost:
    """Cost function drawing a fresh plan per candidate and remembering
    each subset's estimate so the winner's own evaluation can be reported."""

    def __init__(self, dataset, strategy, make_plan, model_config):
        self.dataset = dataset
        self.strategy = strategy
        self.make_plan = make_plan
        self.model_config = model_config
        self.estimates: dict[tuple[int, ...], CvEstimate] = {}

    def __call__(self, subset) -> CvEstimate:
        est = evaluate_cost(
            self.dataset, subset, self.strategy, self.make_plan(), self.model_config
        )
        self.estimates[tuple(subset)] = est
        return est


def _select_with_fresh_plans(dataset, strategy, make_plan, sel_cfg, model_config):
    cost = _RecordingCost(dataset, strategy, make_plan, model_config)
    sel = forward_select(dataset, cost, sel_cfg)
    return sel, cost.estimates[sel.selected]


def run_pipeline(
    dataset: Dataset,
    method: str,
    sel_cfg: SelectionConfig,
    rng: np.random.Generator,
    *,
    k: int = 10,
    train_fraction: float = 0.7,
    test_fraction: float = 0.15,
    model_config: LogisticConfig = DEFAULT_CONFIG,
) -> PipelineResult:
    """Run one full feature-selection pipeline under the given method."""
    if method == "single_holdout":
        sel, est = _select_with_fresh_plans(
            dataset,
            "holdout",
            lambda: split_holdout(dataset, train_fraction, rng),
            sel_cfg,
            model_config,
        )
        return PipelineResult(selected=sel.selected, estimate=est)

    if method == "kfold":
        sel, est = _select_with_fresh_plans(
            dataset, "kfold", lambda: split_kfold(dataset, k, rng), sel_cfg, model_config
        )
        return PipelineResult(selected=sel.selected, estimate=est)

    if method == "train_val_test":
        # The reserved test rows are fixed for the whole run; only the
        # selection's inner folds are redrawn per candidate.
        reservation = split_train_val_test(dataset, test_fraction, k, rng)
        pool_rows = np.flatnonzero(reservation.assignment != TEST_MARK)
        test_rows = np.flatnonzero(reservation.assignment == TEST_MARK)
        sub = Dataset(features=dataset.features[pool_rows], labels=dataset.labels[pool_rows])
        sel, _inner_est = _select_with_fresh_plans(
            sub, "kfold", lambda: split_kfold(sub, k, rng), sel_cfg, model_config
        )
        acc = _train_eval_accuracy(dataset, pool_rows, test_rows, sel.selected, model_config)
        est = CvEstimate.from_accuracies(np.array([acc]))
        return PipelineResult(selected=sel.selected, estimate=est)

    if method == "nested_kfold":
        outer = split_kfold(dataset, k, rng)
        base = child_entropy(rng)
        fold_accs = np.empty(k)
        candidates: list[SelectionResult] = []
        for f in range(k):
            test_rows = np.flatnonzero(outer.assignment == f)
            pool_rows = np.flatnonzero(outer.assignment != f)
            sub = Dataset(
                features=dataset.features[pool_rows], labels=dataset.labels[pool_rows]
            )
            fold_rng = stream_from(base, "outer_fold", f)
            sel, _inner_est = _select_with_fresh_plans(
                sub, "kfold", lambda: split_kfold(sub, k, fold_rng), sel_cfg, model_config
            )
            fold_accs[f] = _train_eval_accuracy(
                dataset, pool_rows, test_rows, sel.selected, model_config
            )
            candidates.append(sel)
        winner = consensus_features([set(c.selected) for c in candidates])
        winner_set = frozenset(winner)
        selected = next(
            c.selected for c in candidates if frozenset(c.selected) == winner_set
        )
        return PipelineResult(
            selected=selected,
            estimate=CvEstimate.from_accuracies(fold_accs),
            candidate_sets=tuple(c.selected for c in candidates),
        )

    raise ValueError(f"unknown method: {method!r}; expected one of {METHODS}")
