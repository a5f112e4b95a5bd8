"""Synthetic two-class Gaussian datasets with controlled effect sizes.

The negative class is drawn from ``m`` independent standard normals; the
positive class shifts the first ``l`` feature means away from zero while
keeping the identity covariance.  The shift of feature 0 is ``d_effect``;
with two discriminative features the second shift may be scaled by
``gamma_d``.  Class sizes may be unbalanced through ``gamma_db``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateInputError
from .rng import stream_from


def round_half_up(x: float) -> int:
    """Deterministic nearest-integer rounding; .5 rounds up."""
    return int(np.floor(x + 0.5))


@dataclass(frozen=True)
class DatasetSpec:
    """Full parameterization of one synthetic scenario.

    n_per_class is the negative-class count; the positive class holds
    round(gamma_db * n_per_class) samples.  d_effect is the standardized
    mean shift of the discriminative features (features 0..l-1).
    """

    n_per_class: int
    m: int
    l: int
    d_effect: float
    gamma_db: float = 1.0
    gamma_d: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.n_per_class < 1:
            raise ValueError("n_per_class must be a positive integer")
        if self.m < 1:
            raise ValueError("m must be a positive integer")
        if not 0 <= self.l <= self.m:
            raise ValueError(f"l must satisfy 0 <= l <= m, got l={self.l}, m={self.m}")
        if self.d_effect < 0:
            raise ValueError("d_effect must be non-negative")
        if self.gamma_db < 1:
            raise ValueError("gamma_db must be >= 1 (pass the larger/smaller ratio)")
        if self.gamma_d < 1:
            raise ValueError("gamma_d must be >= 1 (pass the larger/smaller ratio)")
        if self.gamma_d != 1 and self.l < 2:
            raise ValueError("gamma_d != 1 requires at least two discriminative features")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")

    @property
    def n_positive(self) -> int:
        return round_half_up(self.gamma_db * self.n_per_class)

    @property
    def n_negative(self) -> int:
        return self.n_per_class


@dataclass(frozen=True)
class Dataset:
    """Feature matrix plus binary labels (0 = negative, 1 = positive)."""

    features: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        X = self.features
        y = self.labels
        if X.ndim != 2 or y.ndim != 1 or X.shape[0] != y.shape[0]:
            raise ValueError("features must be (n, m) with one label per row")
        if not np.isfinite(X).all():
            raise ValueError("features contain non-finite values")
        if not ((y == 0) | (y == 1)).all():
            raise ValueError("labels must be 0/1")
        if (y == 0).sum() == 0 or (y == 1).sum() == 0:
            raise ValueError("both classes must be non-empty")

    @property
    def n_samples(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    def class_indices(self, label: int) -> np.ndarray:
        return np.flatnonzero(self.labels == label)


@dataclass(frozen=True)
class EffectProfile:
    """Population standardized mean difference of every feature."""

    per_feature_d: np.ndarray = field(repr=False)


def effect_profile(spec: DatasetSpec) -> EffectProfile:
    d = np.zeros(spec.m)
    d[: spec.l] = spec.d_effect
    if spec.l >= 2:
        d[1] = spec.gamma_d * spec.d_effect
    return EffectProfile(per_feature_d=d)


def positive_class_mean(spec: DatasetSpec) -> np.ndarray:
    # Unit variances in both classes make the mean vector equal the
    # per-feature standardized effect.
    return effect_profile(spec).per_feature_d


def gen_gaussian_dataset(spec: DatasetSpec, rng: np.random.Generator | None = None) -> Dataset:
    """Draw one dataset; identical (spec, stream state) gives identical bytes.

    The negative block is drawn first, then the positive block, so stream
    consumption is well-defined.  Unequal effect sizes (gamma_d != 1) are
    supported only for exactly two discriminative features.
    """
    if spec.gamma_d != 1 and spec.l != 2:
        raise ValueError(
            "unequal effect sizes are defined for exactly two discriminative "
            f"features; got l={spec.l} with gamma_d={spec.gamma_d}"
        )
    if rng is None:
        rng = stream_from("dataset", spec.seed)
    n_neg = spec.n_negative
    n_pos = spec.n_positive
    X = np.empty((n_neg + n_pos, spec.m))
    X[:n_neg] = rng.standard_normal((n_neg, spec.m))
    X[n_neg:] = rng.standard_normal((n_pos, spec.m)) + positive_class_mean(spec)
    labels = np.zeros(n_neg + n_pos, dtype=np.int8)
    labels[n_neg:] = 1
    return Dataset(features=X, labels=labels)


def cohens_d(values_pos, values_neg) -> float:
    """Standardized mean difference: (mean_pos - mean_neg) / pooled std.

    The pooled standard deviation uses the Bessel-corrected per-group
    variances weighted by their degrees of freedom.
    """
    a = np.asarray(values_pos, dtype=np.float64)
    b = np.asarray(values_neg, dtype=np.float64)
    if a.ndim != 1 or b.ndim != 1 or a.size < 2 or b.size < 2:
        raise ValueError("each group needs at least two values")
    var_a = a.var(ddof=1)
    var_b = b.var(ddof=1)
    pooled = ((a.size - 1) * var_a + (b.size - 1) * var_b) / (a.size + b.size - 2)
    if pooled <= 0.0:
        raise DegenerateInputError("pooled variance is zero; effect size undefined")
    return float((a.mean() - b.mean()) / np.sqrt(pooled))
