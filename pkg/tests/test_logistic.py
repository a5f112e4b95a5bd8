import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cvpower.datagen import DatasetSpec, gen_gaussian_dataset
from cvpower.errors import InvalidTrainingSetError, ShapeError
from cvpower.logistic import (
    DEFAULT_CONFIG,
    LogisticConfig,
    TrainedModel,
    accuracy,
    fit_logistic,
    penalized_loglik,
    predict,
)
from cvpower.rng import stream_from


def test_separable_data_classified_perfectly():
    X = np.array([[10.0]] * 5 + [[-10.0]] * 5)
    y = np.array([1] * 5 + [0] * 5)
    model = fit_logistic(X, y)
    assert accuracy(predict(model, X), y) == 1.0
    assert model.weights[0] > 0


def test_null_weight_shrinks():
    rng = stream_from("nulltest")
    X = rng.standard_normal((10_000, 1))
    y = (rng.random(10_000) < 0.5).astype(int)
    model = fit_logistic(X, y)
    assert abs(model.weights[0]) < 0.1


def test_discriminative_feature_dominates():
    spec = DatasetSpec(n_per_class=5_000, m=2, l=1, d_effect=0.8)
    ds = gen_gaussian_dataset(spec, stream_from(7))
    model = fit_logistic(ds.features, ds.labels)
    assert model.weights[0] > 0
    assert abs(model.weights[0]) > 5 * abs(model.weights[1])


def test_predict_tie_breaks_positive():
    model = TrainedModel(weights=np.zeros(2), intercept=0.0, converged=True, iterations=0)
    X = np.zeros((4, 2))
    assert np.all(predict(model, X) == 1)


def test_predict_sign():
    model = TrainedModel(weights=np.array([1.0]), intercept=0.0, converged=True, iterations=0)
    assert predict(model, np.array([[-3.0]]))[0] == 0
    assert predict(model, np.array([[3.0]]))[0] == 1


def test_predict_width_mismatch():
    model = TrainedModel(weights=np.array([1.0, 2.0]), intercept=0.0, converged=True, iterations=0)
    with pytest.raises(ShapeError):
        predict(model, np.zeros((3, 3)))


def test_accuracy_arithmetic():
    assert accuracy([1, 0, 1, 1], [1, 0, 1, 1]) == 1.0
    assert accuracy([1, 0, 1], [0, 1, 0]) == 0.0
    assert accuracy([1, 0, 1, 1], [1, 0, 1, 0]) == 0.75
    with pytest.raises(ShapeError):
        accuracy([1, 0], [1, 0, 1])
    with pytest.raises(ShapeError):
        accuracy([], [])


def test_gradient_vanishes_at_optimum():
    spec = DatasetSpec(n_per_class=100, m=3, l=2, d_effect=0.6)
    ds = gen_gaussian_dataset(spec, stream_from(9))
    model = fit_logistic(ds.features, ds.labels)
    assert model.converged
    theta = np.concatenate([[model.intercept], model.weights])
    h = 1e-5
    for j in range(theta.size):
        up, down = theta.copy(), theta.copy()
        up[j] += h
        down[j] -= h
        grad = (
            penalized_loglik(ds.features, ds.labels, up[1:], up[0], DEFAULT_CONFIG.ridge)
            - penalized_loglik(ds.features, ds.labels, down[1:], down[0], DEFAULT_CONFIG.ridge)
        ) / (2 * h)
        assert abs(grad) < 10 * DEFAULT_CONFIG.tol


def test_rescaling_a_column_keeps_decisions():
    spec = DatasetSpec(n_per_class=60, m=3, l=1, d_effect=0.5)
    ds = gen_gaussian_dataset(spec, stream_from(15))
    base = predict(fit_logistic(ds.features, ds.labels), ds.features)
    scaled = ds.features.copy()
    scaled[:, 1] *= 10.0
    rescaled = predict(fit_logistic(scaled, ds.labels), scaled)
    assert np.array_equal(base, rescaled)


def test_label_swap_negates_coefficients():
    spec = DatasetSpec(n_per_class=60, m=3, l=1, d_effect=0.5)
    ds = gen_gaussian_dataset(spec, stream_from(15))
    m1 = fit_logistic(ds.features, ds.labels)
    m2 = fit_logistic(ds.features, 1 - ds.labels)
    assert np.max(np.abs(m1.weights + m2.weights)) < 1e-6
    assert abs(m1.intercept + m2.intercept) < 1e-6


def test_single_class_rejected():
    with pytest.raises(InvalidTrainingSetError):
        fit_logistic(np.ones((4, 1)), [1, 1, 1, 1])


def test_non_finite_rejected():
    X = np.array([[1.0], [np.nan], [0.0], [2.0]])
    with pytest.raises(ValueError, match="non-finite"):
        fit_logistic(X, [0, 1, 0, 1])


def test_non_binary_labels_rejected():
    with pytest.raises(InvalidTrainingSetError):
        fit_logistic(np.ones((3, 1)), [0, 1, 2])


def test_exhausted_iterations_is_not_an_error():
    X = np.array([[10.0]] * 5 + [[-10.0]] * 5)
    y = np.array([1] * 5 + [0] * 5)
    model = fit_logistic(X, y, LogisticConfig(max_iter=1))
    assert not model.converged
    assert model.iterations == 1


def test_iterations_within_budget():
    spec = DatasetSpec(n_per_class=50, m=2, l=1, d_effect=0.3)
    ds = gen_gaussian_dataset(spec, stream_from(21))
    model = fit_logistic(ds.features, ds.labels)
    assert model.iterations <= DEFAULT_CONFIG.max_iter
    assert model.weights.shape == (2,)


@settings(max_examples=20, deadline=None)
@given(
    seed=st.integers(min_value=0, max_value=2**31),
    n=st.integers(min_value=4, max_value=60),
    p=st.integers(min_value=1, max_value=3),
)
def test_converged_fits_have_small_gradients(seed, n, p):
    rng = stream_from("hypofit", seed)
    X = rng.standard_normal((n, p))
    y = np.zeros(n, dtype=int)
    y[: n // 2] = 1
    model = fit_logistic(X, y)
    if model.converged:
        ll0 = penalized_loglik(X, y, model.weights, model.intercept, DEFAULT_CONFIG.ridge)
        bumped = penalized_loglik(
            X, y, model.weights + 1e-4, model.intercept, DEFAULT_CONFIG.ridge
        )
        assert bumped <= ll0 + 1e-6  # local maximum
