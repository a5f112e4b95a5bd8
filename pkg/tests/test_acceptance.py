"""Acceptance suite: one test per release criterion, at desk scale.

Monte Carlo criteria run 500 repetitions from a fixed master seed through
the session-wide scenario cache (scenarios shared between criteria are
computed once).  Each test prints one PASS line; a failed assertion is
the FAIL line.
"""

import itertools
import time

import numpy as np
import pytest

from cvpower.calculator import (
    default_power_model,
    nested_model_confidence,
    recommended_sample_size,
    required_sample_size,
)
from cvpower.campaign import parse_campaign_config, run_campaign
from cvpower.crossval import consensus_features
from cvpower.curvefit import PlaneFit, fit_plane, fit_power_curve, mpe, rmse
from cvpower.datagen import DatasetSpec
from cvpower.montecarlo import McConfig, ci_bound, confidence_cld, crossing_from_bounds
from cvpower.selection import SelectionConfig, forward_select
from cvpower.rng import stream_from
from cvpower import tables

MASTER_SEED = 20240817
REPS = 500


def mc_config(n, m, l, d, method):
    return McConfig(
        spec=DatasetSpec(n_per_class=n, m=m, l=l, d_effect=d),
        method=method,
        sel_cfg=SelectionConfig.fixed(l),
        repetitions=REPS,
        master_seed=MASTER_SEED,
    )


def h0_suite(scenario_cache):
    return {
        method: scenario_cache(mc_config(50, 20, 2, 0.0, method))
        for method in ("single_holdout", "kfold", "train_val_test", "nested_kfold")
    }


def test_criterion_1_closed_form_exactness():
    assert required_sample_size(0.6, 20, 2) == 89
    assert required_sample_size(1.0, 10, 2) == 31
    assert required_sample_size(0.8, 40, 4) == 41
    # deterministic and fast
    assert all(required_sample_size(0.6, 20, 2) == 89 for _ in range(10))
    t0 = time.perf_counter()
    for _ in range(1000):
        required_sample_size(0.6, 20, 2)
    per_call = (time.perf_counter() - t0) / 1000
    assert per_call < 1e-3
    print(f"\nACCEPTANCE 1 PASS: closed-form calculator exact (89/31/41), {per_call * 1e6:.0f} us/call")


def test_criterion_2_table_fidelity():
    model = default_power_model()
    checked = 0
    for mi, m in enumerate(model.grid.m_values):
        for ni, n in enumerate(model.grid.n_values):
            for di, d in enumerate(model.grid.d_values):
                assert nested_model_confidence(d, m, n, model) == tables.C22_PERCENT[mi][ni][di]
                checked += 1
    assert checked == 280
    assert recommended_sample_size(0.6, 40, 95) == 342
    assert recommended_sample_size(0.6, 40, 95) == 342  # deterministic
    print("\nACCEPTANCE 2 PASS: all 280 grid entries exact; recommended n(0.6, 40, 95%) = 342")


def test_criterion_3_coefficient_recovery_pipeline():
    t0 = time.perf_counter()
    true_planes = {
        "a": PlaneFit(*tables.PLANE_A),
        "b": PlaneFit(*tables.PLANE_B),
        "c": PlaneFit(*tables.PLANE_C),
    }
    d_grid = (0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0)
    cell_points = {name: [] for name in true_planes}
    for m in (10, 20, 30, 40):
        for l in (2, 3, 4):
            a = true_planes["a"].predict(l, m)
            b = true_planes["b"].predict(l, m)
            c = true_planes["c"].predict(l, m)
            n_required = [a * d**b + c for d in d_grid]
            fit = fit_power_curve(d_grid, n_required)
            cell_points["a"].append(((l, m), fit.a))
            cell_points["b"].append(((l, m), fit.b))
            cell_points["c"].append(((l, m), fit.c))
    worst = 0.0
    for name, truth in true_planes.items():
        recovered = fit_plane(cell_points[name])
        for got, want in (
            (recovered.intercept, truth.intercept),
            (recovered.coef_l, truth.coef_l),
            (recovered.coef_m, truth.coef_m),
        ):
            rel = abs(got - want) / abs(want)
            worst = max(worst, rel)
            assert rel < 1e-6
    elapsed = time.perf_counter() - t0
    assert elapsed < 1.0
    print(f"\nACCEPTANCE 3 PASS: nine coefficients recovered (worst rel err {worst:.2e}) in {elapsed:.2f}s")


def test_criterion_4_null_bias_ordering(scenario_cache):
    s = h0_suite(scenario_cache)
    means = {m: s[m].mean_acc for m in s}
    assert means["single_holdout"] > 0.53
    assert means["kfold"] > 0.53
    assert abs(means["train_val_test"] - 0.5) <= 0.02
    assert abs(means["nested_kfold"] - 0.5) <= 0.02
    print(
        "\nACCEPTANCE 4 PASS: null means "
        + ", ".join(f"{m}={v:.4f}" for m, v in means.items())
    )


def test_criterion_5_null_upper_bound_levels(scenario_cache):
    s = h0_suite(scenario_cache)
    sh = s["single_holdout"].h0_upper
    nested = s["nested_kfold"].h0_upper
    assert 0.71 <= sh <= 0.82
    assert 0.58 <= nested <= 0.66
    print(f"\nACCEPTANCE 5 PASS: null upper bounds single_holdout={sh:.4f}, nested={nested:.4f}")


def test_criterion_6_dispersion_ordering(scenario_cache):
    s = h0_suite(scenario_cache)
    stds = {m: s[m].std_acc for m in s}
    order = ["train_val_test", "single_holdout", "nested_kfold", "kfold"]
    chain = " > ".join(f"{m}={stds[m]:.4f}" for m in order)
    assert (
        stds["train_val_test"] > stds["single_holdout"] > stds["nested_kfold"] > stds["kfold"]
    ), f"dispersion ordering violated: {chain}"
    print(f"\nACCEPTANCE 6 PASS: dispersion ordering {chain}")


def test_criterion_7_confidence_gap(scenario_cache):
    nested = scenario_cache(mc_config(100, 20, 2, 0.8, "nested_kfold")).confidence[(2, 2)]
    holdout = scenario_cache(mc_config(100, 20, 2, 0.8, "single_holdout")).confidence[(2, 2)]
    assert 0.71 <= nested <= 0.87
    assert 0.12 <= holdout <= 0.30
    print(f"\nACCEPTANCE 7 PASS: C22 nested={nested:.4f}, single_holdout={holdout:.4f}")


def test_criterion_8_feature_space_robustness(scenario_cache):
    wide = scenario_cache(mc_config(200, 40, 2, 0.8, "nested_kfold")).confidence[(2, 2)]
    narrow = scenario_cache(mc_config(200, 5, 2, 0.8, "nested_kfold")).confidence[(2, 2)]
    assert wide >= narrow - 0.08
    print(f"\nACCEPTANCE 8 PASS: C22 at n=200 m=40 {wide:.4f} vs m=5 {narrow:.4f}")


def test_criterion_9_required_n_crossing(scenario_cache):
    n_grid = list(range(25, 201, 25))
    h0_vals, ha_vals = [], []
    for n in n_grid:
        h0_vals.append(scenario_cache(mc_config(n, 20, 2, 0.0, "nested_kfold")).h0_upper)
        ha_vals.append(scenario_cache(mc_config(n, 20, 2, 0.6, "nested_kfold")).ha_lower)
    result = crossing_from_bounds(n_grid, h0_vals, ha_vals, fit_kind="two_term_exp")
    assert 60.0 <= result.crossing_n <= 130.0
    print(f"\nACCEPTANCE 9 PASS: empirical required n crossing at {result.crossing_n:.1f} pairs")


CAMPAIGN_TEXT = """\
n = 12, 15
m = 3
l = 1
d = 0.0, 0.6
method = single_holdout, kfold
k = 4
repetitions = 8
master_seed = 77
write_repetitions = true
"""


def test_criterion_10_determinism_and_parallel_invariance(tmp_path):
    config_path = tmp_path / "campaign.cfg"
    config_path.write_text(CAMPAIGN_TEXT, encoding="utf-8")
    config = parse_campaign_config(config_path)
    outputs = []
    for name, workers in (("w1", 1), ("w2", 2), ("w1b", 1)):
        outcome = run_campaign(config, tmp_path / name, workers=workers, log=lambda *_: None)
        outputs.append(
            (outcome.summary_path.read_bytes(), outcome.repetitions_path.read_bytes())
        )
    assert outputs[0] == outputs[1] == outputs[2]
    print("\nACCEPTANCE 10 PASS: summaries byte-identical across reruns and worker counts")


def test_criterion_11_oracle_micro_suites():
    # percentile interpolation against a hand-rolled order-statistic rule
    values = [0.12, 0.3, 0.31, 0.44, 0.5, 0.62, 0.7, 0.81, 0.93, 1.0]

    def brute_percentile(sorted_vals, q):
        pos = (len(sorted_vals) - 1) * q / 100.0
        lo, hi = int(np.floor(pos)), int(np.ceil(pos))
        frac = pos - lo
        return sorted_vals[lo] * (1 - frac) + sorted_vals[hi] * frac

    for alpha in (0.05, 0.2, 0.5):
        assert ci_bound(values, "h0_upper", alpha) == pytest.approx(
            brute_percentile(values, (1 - alpha) * 100), abs=1e-12
        )
        assert ci_bound(values, "ha_lower", alpha) == pytest.approx(
            brute_percentile(values, alpha * 100), abs=1e-12
        )

    # C_{l,d} against explicit enumeration
    sets = [{0, 1}, {0, 5}, {7, 9}, {1, 0}, {0, 2}]
    true = {0, 1}
    for d in (1, 2):
        brute = sum(1 for s in sets if len(s & true) >= d) / len(sets)
        assert confidence_cld(sets, true, d) == brute

    # RMSE / MPE hand arithmetic
    assert rmse([90.0, 120.0], [100.0, 100.0]) == pytest.approx(np.sqrt(250.0))
    assert mpe([90.0, 120.0], [100.0, 100.0]) == pytest.approx(15.0)

    # greedy forward selection replayed against brute force (m = 4, two steps)
    rng = stream_from("acceptance-greedy")
    costs = {}
    for size in (1, 2):
        for subset in itertools.combinations(range(4), size):
            costs[frozenset(subset)] = round(float(rng.random()), 3)

    class Est:
        def __init__(self, mean_acc):
            self.mean_acc = mean_acc

    class FourFeatures:
        n_features = 4

    result = forward_select(
        FourFeatures(), lambda s: Est(costs[frozenset(s)]), SelectionConfig.fixed(2)
    )
    first = min(range(4), key=lambda f: (-costs[frozenset({f})], f))
    second = min(
        (f for f in range(4) if f != first),
        key=lambda f: (-costs[frozenset({first, f})], f),
    )
    assert result.selected == (first, second)

    # consensus tie-breaking against brute force over its definition
    candidate_sets = [{1, 2}, {1, 2}, {2, 3}, {1, 3}, {3, 4}, {2, 3}]
    from collections import Counter

    fs = [frozenset(s) for s in candidate_sets]
    mult = Counter(fs)
    freq = Counter(f for s in fs for f in s)
    brute_winner = min(
        set(fs), key=lambda s: (-mult[s], -sum(freq[f] for f in s), tuple(sorted(s)))
    )
    assert consensus_features(candidate_sets) == tuple(sorted(brute_winner))
    print("\nACCEPTANCE 11 PASS: oracle micro-suites (percentile, C_ld, errors, greedy, consensus)")
