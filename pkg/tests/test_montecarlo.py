import numpy as np
import pytest

from dataclasses import replace

from cvpower.datagen import DatasetSpec
from cvpower.errors import InfeasibleSplitError, NoCrossingError
from cvpower.montecarlo import (
    McConfig,
    accuracy_by_effect_size,
    ci_bound,
    confidence_cld,
    crossing_from_bounds,
    required_n_empirical,
    run_scenario,
    scenario_key,
)
from cvpower.selection import SelectionConfig


def small_config(**overrides):
    base = dict(
        spec=DatasetSpec(n_per_class=12, m=3, l=1, d_effect=0.5),
        method="single_holdout",
        sel_cfg=SelectionConfig.fixed(1),
        repetitions=6,
        master_seed=42,
    )
    base.update(overrides)
    return McConfig(**base)


def test_ci_bound_constant_vector():
    values = [0.5] * 7
    assert ci_bound(values, "h0_upper", 0.05) == 0.5
    assert ci_bound(values, "ha_lower", 0.2) == 0.5


def test_ci_bound_interpolated_percentiles():
    values = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0]
    assert ci_bound(values, "h0_upper", 0.05) == pytest.approx(0.955, abs=1e-12)
    assert ci_bound(values, "ha_lower", 0.2) == pytest.approx(0.28, abs=1e-12)


def test_ci_bound_validation():
    with pytest.raises(ValueError):
        ci_bound([], "h0_upper", 0.05)
    with pytest.raises(ValueError):
        ci_bound([0.5], "h0_upper", 1.5)
    with pytest.raises(ValueError):
        ci_bound([0.5], "sideways", 0.05)


def test_confidence_cld_enumeration():
    sets = [{0, 1}, {0, 5}, {7, 9}, {1, 0}]
    assert confidence_cld(sets, {0, 1}, 1) == 0.75
    assert confidence_cld(sets, {0, 1}, 2) == 0.5
    assert confidence_cld(sets, {0, 1}, 0) == 1.0


def test_confidence_cld_perfect_selection():
    sets = [{0, 1}] * 5
    for d in (1, 2):
        assert confidence_cld(sets, {0, 1}, d) == 1.0


def test_confidence_cld_validation():
    with pytest.raises(ValueError):
        confidence_cld([{0, 1}], {0, 1}, 3)
    with pytest.raises(ValueError):
        confidence_cld([{0, 1, 2}], {0, 1}, 1)
    with pytest.raises(ValueError):
        confidence_cld([], {0, 1}, 1)


def test_scenario_summary_shape():
    cfg = small_config()
    summary = run_scenario(cfg)
    assert summary.accuracies.shape == (6,)
    assert summary.mean_acc == pytest.approx(np.mean(summary.accuracies))
    assert summary.std_acc == pytest.approx(np.std(summary.accuracies))
    assert summary.ha_lower is not None and summary.h0_upper is None
    assert summary.selection_counts.sum() == 6  # one feature per repetition
    assert set(summary.confidence) == {(1, 1)}


def test_null_scenario_reports_h0_bound():
    cfg = small_config(spec=DatasetSpec(n_per_class=12, m=3, l=1, d_effect=0.0))
    summary = run_scenario(cfg)
    assert summary.h0_upper is not None and summary.ha_lower is None


def test_scenario_determinism():
    cfg = small_config()
    a = run_scenario(cfg)
    b = run_scenario(cfg)
    assert np.array_equal(a.accuracies, b.accuracies)
    assert a.confidence == b.confidence
    assert np.array_equal(a.selection_counts, b.selection_counts)


def test_worker_count_invariance():
    cfg = small_config(repetitions=8)
    serial = run_scenario(cfg, workers=1)
    parallel = run_scenario(cfg, workers=2)
    assert serial.accuracies.tobytes() == parallel.accuracies.tobytes()
    assert serial.confidence == parallel.confidence
    assert np.array_equal(serial.selection_counts, parallel.selection_counts)
    assert serial.selected_sets == parallel.selected_sets


def test_confidence_monotone_in_d():
    cfg = McConfig(
        spec=DatasetSpec(n_per_class=15, m=4, l=2, d_effect=0.8),
        method="kfold",
        sel_cfg=SelectionConfig.fixed(2),
        repetitions=30,
        master_seed=7,
        k=5,
    )
    summary = run_scenario(cfg)
    assert summary.confidence[(2, 1)] >= summary.confidence[(2, 2)]


def test_infeasible_scenario_rejected_before_running():
    cfg = small_config(
        spec=DatasetSpec(n_per_class=5, m=3, l=1, d_effect=0.5), method="kfold"
    )
    with pytest.raises(InfeasibleSplitError):
        run_scenario(cfg)


def test_config_validation():
    with pytest.raises(ValueError):
        small_config(repetitions=1)
    with pytest.raises(ValueError):
        small_config(alpha=0.0)
    with pytest.raises(ValueError):
        small_config(beta=1.0)
    with pytest.raises(ValueError):
        small_config(method="magic")


def test_scenario_key_excludes_budget():
    a = scenario_key(small_config(repetitions=6))
    b = scenario_key(small_config(repetitions=60))
    assert a == b
    c = scenario_key(small_config(method="kfold"))
    assert a != c


def test_crossing_on_analytic_fixture():
    n = np.arange(25, 201, 25)
    res = crossing_from_bounds(n, 0.5 + 10.0 / n, 0.7 - 10.0 / n)
    assert 95.0 < res.crossing_n < 105.0
    res_q = crossing_from_bounds(n, 0.5 + 10.0 / n, 0.7 - 10.0 / n, fit_kind="quadratic")
    assert 90.0 < res_q.crossing_n < 110.0


def test_crossing_exact_for_representable_curves():
    n = np.arange(25, 201, 25)
    h0 = 0.5 + 0.3 * np.exp(-0.02 * n)
    ha = 0.7 - 0.3 * np.exp(-0.02 * n)
    res = crossing_from_bounds(n, h0, ha)
    assert res.crossing_n == pytest.approx(np.log(3.0) / 0.02, abs=1e-4)


def test_crossing_requires_sign_change():
    n = np.arange(25, 201, 25)
    low = np.full(n.size, 0.5)
    high = np.full(n.size, 0.9)
    with pytest.raises(NoCrossingError, match="powered at the minimum"):
        crossing_from_bounds(n, low, high)
    with pytest.raises(NoCrossingError, match="underpowered"):
        crossing_from_bounds(n, high, low)


def test_crossing_validation():
    with pytest.raises(ValueError):
        crossing_from_bounds([1, 2, 3], [1, 2, 3], [3, 2, 1])
    with pytest.raises(ValueError):
        crossing_from_bounds([1, 2, 2, 4], [1, 2, 3, 4], [4, 3, 2, 1])


def acceptance_scale(n, m, method="nested_kfold", d=0.8):
    return McConfig(
        spec=DatasetSpec(n_per_class=n, m=m, l=2, d_effect=d),
        method=method,
        sel_cfg=SelectionConfig.fixed(2),
        repetitions=500,
        master_seed=20240817,
    )


def test_confidence_non_decreasing_in_sample_size(scenario_cache):
    # allow two percentage points of Monte Carlo slack
    values = [
        scenario_cache(acceptance_scale(n, 20)).confidence[(2, 2)]
        for n in (50, 100, 150, 200)
    ]
    assert all(b >= a - 0.02 for a, b in zip(values, values[1:])), values


def test_small_feature_space_penalty_is_bounded(scenario_cache):
    narrow = scenario_cache(acceptance_scale(100, 5)).confidence[(2, 2)]
    wide = scenario_cache(acceptance_scale(100, 40)).confidence[(2, 2)]
    assert narrow > wide - 0.02, (narrow, wide)


def test_empirical_required_n_follows_power_law():
    # End-to-end: empirical required-n grid over the effect size, then a
    # power-curve fit; the fit must reproduce its own grid within 10% MPE
    # and the required n must fall as the effect grows.
    from cvpower.curvefit import fit_power_curve, mpe

    n_grid = list(range(10, 65, 5))
    base = McConfig(
        spec=DatasetSpec(n_per_class=10, m=5, l=2, d_effect=0.0),
        method="kfold",
        sel_cfg=SelectionConfig.fixed(2),
        repetitions=200,
        master_seed=314,
    )
    h0 = [
        run_scenario(replace(base, spec=replace(base.spec, n_per_class=n))).h0_upper
        for n in n_grid
    ]
    d_grid = (0.7, 0.8, 0.9, 1.0, 1.1)
    crossings = []
    for d in d_grid:
        ha = [
            run_scenario(
                replace(base, spec=replace(base.spec, n_per_class=n, d_effect=d))
            ).ha_lower
            for n in n_grid
        ]
        crossings.append(crossing_from_bounds(n_grid, h0, ha).crossing_n)
    assert all(b < a for a, b in zip(crossings, crossings[1:])), crossings
    fit = fit_power_curve(d_grid, crossings)
    assert mpe(fit.predict(np.array(d_grid)), crossings) < 10.0


def test_required_n_empirical_matches_manual_composition():
    cfg = McConfig(
        spec=DatasetSpec(n_per_class=10, m=3, l=1, d_effect=1.2),
        method="single_holdout",
        sel_cfg=SelectionConfig.fixed(1),
        repetitions=40,
        master_seed=5,
    )
    grid = [8, 12, 16, 20, 24]
    h0_vals, ha_vals = [], []
    for n in grid:
        h0_vals.append(
            run_scenario(replace(cfg, spec=replace(cfg.spec, n_per_class=n, d_effect=0.0))).h0_upper
        )
        ha_vals.append(
            run_scenario(replace(cfg, spec=replace(cfg.spec, n_per_class=n))).ha_lower
        )
    try:
        expected = crossing_from_bounds(grid, h0_vals, ha_vals).crossing_n
    except NoCrossingError:
        expected = None
    if expected is None:
        with pytest.raises(NoCrossingError):
            required_n_empirical(cfg, grid)
    else:
        result = required_n_empirical(cfg, grid)
        assert result.crossing_n == expected
        assert result.h0_upper == tuple(h0_vals)
        assert result.ha_lower == tuple(ha_vals)


def test_required_n_empirical_requires_positive_effect():
    cfg = McConfig(
        spec=DatasetSpec(n_per_class=10, m=3, l=1, d_effect=0.0),
        method="single_holdout",
        sel_cfg=SelectionConfig.fixed(1),
        repetitions=10,
        master_seed=5,
    )
    with pytest.raises(ValueError):
        required_n_empirical(cfg, [8, 10, 12, 14])


def test_accuracy_lookup_cell_builder():
    ds, accs = accuracy_by_effect_size(
        DatasetSpec(n_per_class=14, m=3, l=1, d_effect=0.4),
        d_values=(0.5, 1.5),
        method="single_holdout",
        repetitions=40,
        master_seed=3,
    )
    assert ds == (0.5, 1.5)
    assert accs[1] > accs[0]  # stronger effect, higher accuracy
