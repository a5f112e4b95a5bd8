"""Binary logistic regression, the classifier wrapped by every pipeline.

Fitting maximizes the log-likelihood with a small ridge penalty on the
non-intercept coefficients (Newton iterations with backtracking).  The
penalty bounds the weights when training data are perfectly separable,
which happens routinely at small sample sizes during feature selection.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import InvalidTrainingSetError, ShapeError


@dataclass(frozen=True)
class LogisticConfig:
    max_iter: int = 100
    tol: float = 1e-8        # gradient max-norm
    ridge: float = 1e-6


DEFAULT_CONFIG = LogisticConfig()


@dataclass(frozen=True)
class TrainedModel:
    weights: np.ndarray
    intercept: float
    converged: bool
    iterations: int

    @property
    def n_features(self) -> int:
        return self.weights.shape[0]


def _as_label_float(labels) -> np.ndarray:
    y = np.asarray(labels)
    if y.ndim != 1:
        raise ShapeError(f"labels must be 1-D, got shape {y.shape}")
    yf = y.astype(np.float64)
    if not np.isin(yf, (0.0, 1.0)).all():
        raise InvalidTrainingSetError("labels must be binary 0/1")
    return yf


def fit_logistic(features, labels, config: LogisticConfig = DEFAULT_CONFIG) -> TrainedModel:
    """Fit the ridge-penalized model; never raises on slow convergence.

    A run that exhausts ``max_iter`` returns the last iterate with
    ``converged=False`` so selection loops can keep going on hard folds.
    """
    X = np.ascontiguousarray(np.asarray(features, dtype=np.float64))
    if X.ndim != 2:
        raise ShapeError(f"features must be 2-D, got shape {X.shape}")
    n, p = X.shape
    if p < 1:
        raise ShapeError("need at least one feature column")
    if not np.isfinite(X).all():
        raise ValueError("features contain non-finite values")
    y = _as_label_float(labels)
    if y.shape[0] != n:
        raise ShapeError(f"{n} rows but {y.shape[0]} labels")
    if n < 2:
        raise InvalidTrainingSetError("need at least two samples")
    if y.min() == y.max():
        raise InvalidTrainingSetError("training labels contain a single class")

    X1 = np.empty((n, p + 1))
    X1[:, 0] = 1.0
    X1[:, 1:] = X
    beta, converged, iterations, _ll = _kernels.newton_logistic(
        X1, y, config.ridge, config.tol, config.max_iter
    )
    return TrainedModel(
        weights=beta[1:].copy(),
        intercept=float(beta[0]),
        converged=bool(converged),
        iterations=int(iterations),
    )


def decision_values(model: TrainedModel, features) -> np.ndarray:
    X = np.asarray(features, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != model.n_features:
        raise ShapeError(
            f"feature width {X.shape[1] if X.ndim == 2 else '?'} does not match "
            f"model width {model.n_features}"
        )
    return model.intercept + X @ model.weights


def predict(model: TrainedModel, features) -> np.ndarray:
    """Class labels; a logit of exactly zero classifies as positive."""
    return (decision_values(model, features) >= 0.0).astype(np.int8)


def accuracy(predicted, actual) -> float:
    """Fraction of agreeing entries of two equal-length binary vectors."""
    p = np.asarray(predicted)
    a = np.asarray(actual)
    if p.shape != a.shape:
        raise ShapeError(f"shape mismatch: {p.shape} vs {a.shape}")
    if p.size == 0:
        raise ShapeError("empty vectors")
    return float(np.mean(p == a))


def penalized_loglik(features, labels, weights, intercept, ridge) -> float:
    """Objective value at arbitrary coefficients (used by gradient checks)."""
    X = np.asarray(features, dtype=np.float64)
    y = _as_label_float(labels)
    z = intercept + X @ np.asarray(weights, dtype=np.float64)
    softplus = np.where(z > 0, z + np.log1p(np.exp(-z)), np.log1p(np.exp(z)))
    return float(np.sum(y * z - softplus) - 0.5 * ridge * np.sum(np.square(weights)))
