"""Four-way cross-validation comparison on a user-supplied CSV dataset.

Each repetition balances the dataset by randomly down-sampling the larger
class, then runs every requested method at every requested model size.
The report mirrors the two standard views: mean/std test accuracy per
(method, size), and the probability of each feature being chosen at each
selection step.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .crossval import METHODS, assert_feasible, run_pipeline
from .datagen import Dataset
from .errors import UserDataError
from .logistic import DEFAULT_CONFIG, LogisticConfig
from .rng import stream_from
from .selection import SelectionConfig

ACCURACY_HEADER = ("method", "n_selected", "repeats", "mean_acc", "std_acc")
SELECTION_HEADER = ("method", "n_selected", "step", "feature", "probability")


@dataclass(frozen=True)
class UserDataset:
    """Numeric features plus a binary label column from a CSV file."""

    feature_names: tuple[str, ...]
    features: np.ndarray = field(repr=False)
    labels: np.ndarray = field(repr=False)
    label_values: tuple[str, str]  # (negative, positive) as written in the file

    @property
    def n_samples(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]


def load_user_dataset(path, label_column: str) -> UserDataset:
    """Read a CSV (header row, '.' decimals, UTF-8) into a UserDataset.

    Label values may be any two distinct strings; the lexicographically
    smaller one becomes the negative class.  Parse failures name the
    offending line and column.
    """
    path = Path(path)
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise UserDataError(f"{path.name}: file is empty") from None
        header = [h.strip() for h in header]
        if label_column not in header:
            raise UserDataError(
                f"{path.name}: no column named {label_column!r} (found {header})"
            )
        label_idx = header.index(label_column)
        feature_names = tuple(h for i, h in enumerate(header) if i != label_idx)
        rows: list[list[float]] = []
        raw_labels: list[str] = []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != len(header):
                raise UserDataError(
                    f"{path.name}:line {lineno}: {len(row)} cells, expected {len(header)}"
                )
            values = []
            for i, cell in enumerate(row):
                if i == label_idx:
                    continue
                cell = cell.strip()
                if not cell:
                    raise UserDataError(
                        f"{path.name}:line {lineno}, column {header[i]!r}: empty cell"
                    )
                try:
                    values.append(float(cell))
                except ValueError:
                    raise UserDataError(
                        f"{path.name}:line {lineno}, column {header[i]!r}: "
                        f"non-numeric value {cell!r}"
                    ) from None
            label = row[label_idx].strip()
            if not label:
                raise UserDataError(
                    f"{path.name}:line {lineno}, column {label_column!r}: empty cell"
                )
            rows.append(values)
            raw_labels.append(label)

    if not rows:
        raise UserDataError(f"{path.name}: no data rows")
    classes = sorted(set(raw_labels))
    if len(classes) != 2:
        raise UserDataError(
            f"{path.name}: label column must hold exactly two values, found {classes}"
        )
    labels = np.array([classes.index(v) for v in raw_labels], dtype=np.int8)
    if (labels == 0).sum() < 2 or (labels == 1).sum() < 2:
        raise UserDataError(f"{path.name}: need at least 2 samples per class")
    features = np.array(rows, dtype=np.float64)
    if not np.isfinite(features).all():
        raise UserDataError(f"{path.name}: features contain non-finite values")
    return UserDataset(
        feature_names=feature_names,
        features=features,
        labels=labels,
        label_values=(classes[0], classes[1]),
    )


@dataclass(frozen=True)
class ComparisonReport:
    feature_names: tuple[str, ...]
    methods: tuple[str, ...]
    l_values: tuple[int, ...]
    repeats: int
    # (method, l) -> per-repeat accuracies
    accuracies: dict[tuple[str, int], tuple[float, ...]]
    # (method, l) -> matrix of shape (l, n_features): P(feature chosen at step)
    selection_probability: dict[tuple[str, int], np.ndarray]

    def accuracy_rows(self) -> list[dict[str, str]]:
        rows = []
        for method in self.methods:
            for l in self.l_values:
                accs = np.asarray(self.accuracies[(method, l)])
                rows.append(
                    {
                        "method": method,
                        "n_selected": str(l),
                        "repeats": str(self.repeats),
                        "mean_acc": f"{accs.mean():.17g}",
                        "std_acc": f"{accs.std():.17g}",
                    }
                )
        return rows

    def selection_rows(self) -> list[dict[str, str]]:
        rows = []
        for method in self.methods:
            for l in self.l_values:
                matrix = self.selection_probability[(method, l)]
                for step in range(matrix.shape[0]):
                    for j, name in enumerate(self.feature_names):
                        rows.append(
                            {
                                "method": method,
                                "n_selected": str(l),
                                "step": str(step + 1),
                                "feature": name,
                                "probability": f"{matrix[step, j]:.17g}",
                            }
                        )
        return rows

    def write(self, out_dir) -> tuple[Path, Path]:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        acc_path = out_dir / "comparison_accuracy.csv"
        sel_path = out_dir / "comparison_selection.csv"
        _write_csv(acc_path, ACCURACY_HEADER, self.accuracy_rows())
        _write_csv(sel_path, SELECTION_HEADER, self.selection_rows())
        return acc_path, sel_path


def _write_csv(path, header, rows):
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=header, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    Path(path).write_text(buf.getvalue(), encoding="utf-8")


def read_comparison_csv(path) -> list[dict[str, str]]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        return list(csv.DictReader(fh))


def _balanced_dataset(user_ds: UserDataset, rng) -> Dataset:
    idx_neg = np.flatnonzero(user_ds.labels == 0)
    idx_pos = np.flatnonzero(user_ds.labels == 1)
    n_small = min(idx_neg.size, idx_pos.size)
    keep = []
    for idx in (idx_neg, idx_pos):
        if idx.size > n_small:
            keep.append(np.sort(rng.permutation(idx)[:n_small]))
        else:
            keep.append(idx)
    rows = np.sort(np.concatenate(keep))
    return Dataset(features=user_ds.features[rows], labels=user_ds.labels[rows])


def _compare_repetition(args):
    user_ds, methods, l_values, seed, rep, k, model_config = args
    balanced = _balanced_dataset(user_ds, stream_from(seed, "balance", rep))
    out = {}
    for method in methods:
        for l in l_values:
            rng = stream_from(seed, "compare", rep, method, l)
            result = run_pipeline(
                balanced, method, SelectionConfig.fixed(l), rng,
                k=k, model_config=model_config,
            )
            out[(method, l)] = (result.estimate.mean_acc, result.selected)
    return out


def compare_cv(
    user_ds: UserDataset,
    l_values,
    repeats: int,
    seed: int,
    k: int = 10,
    methods=METHODS,
    workers: int = 1,
    model_config: LogisticConfig = DEFAULT_CONFIG,
    log=None,
) -> ComparisonReport:
    """Repeatedly balance, select, and evaluate under every method/size."""
    l_values = tuple(int(l) for l in l_values)
    methods = tuple(methods)
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    if not l_values:
        raise ValueError("l_values must be non-empty")
    m = user_ds.n_features
    for l in l_values:
        if not 1 <= l <= m:
            raise ValueError(f"n_selected={l} outside 1..{m}")
    n_small = int(min((user_ds.labels == 0).sum(), (user_ds.labels == 1).sum()))
    for method in methods:
        assert_feasible(n_small, n_small, method, k=k)

    tasks = [(user_ds, methods, l_values, seed, rep, k, model_config) for rep in range(repeats)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_compare_repetition, tasks, chunksize=1))
    else:
        results = []
        for t in tasks:
            results.append(_compare_repetition(t))
            if log is not None:
                log(f"repeat {t[4] + 1}/{repeats} done")

    accuracies: dict[tuple[str, int], tuple[float, ...]] = {}
    probability: dict[tuple[str, int], np.ndarray] = {}
    for method in methods:
        for l in l_values:
            accs = tuple(r[(method, l)][0] for r in results)
            counts = np.zeros((l, m))
            for r in results:
                selected = r[(method, l)][1]
                for step, feat in enumerate(selected):
                    counts[step, feat] += 1
            accuracies[(method, l)] = accs
            probability[(method, l)] = counts / repeats
    return ComparisonReport(
        feature_names=user_ds.feature_names,
        methods=methods,
        l_values=l_values,
        repeats=repeats,
        accuracies=accuracies,
        selection_probability=probability,
    )
