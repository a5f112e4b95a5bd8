"""Monte Carlo power analysis for cross-validated machine-learning studies.

The package generates synthetic Gaussian two-class datasets, runs wrapper
forward feature selection with logistic regression under four
cross-validation strategies, and aggregates repeated runs into the
null/alternative accuracy distributions that drive sample-size and
model-confidence estimates.  Deterministic calculators expose the fitted
closed-form sample-size model and the shipped confidence lookup tables.
"""

from .calculator import (
    AccuracyLookup,
    ConfidenceGrid,
    PowerModel,
    adjust_unbalanced,
    default_power_model,
    effective_d,
    equivalent_cohens_d,
    nested_model_confidence,
    recommended_sample_size,
    required_sample_size,
)
from .crossval import (
    METHODS,
    CvEstimate,
    PipelineResult,
    SplitPlan,
    assert_feasible,
    consensus_features,
    evaluate_cost,
    run_pipeline,
    split_holdout,
    split_kfold,
    split_train_val_test,
)
from .curvefit import (
    ExpFit,
    PlaneFit,
    PowerFit,
    fit_plane,
    fit_power_curve,
    fit_quadratic,
    fit_two_term_exp,
    mpe,
    rmse,
)
from .datagen import Dataset, DatasetSpec, EffectProfile, cohens_d, effect_profile, gen_gaussian_dataset
from .logistic import LogisticConfig, TrainedModel, accuracy, fit_logistic, predict
from .montecarlo import (
    CrossingResult,
    McConfig,
    McSummary,
    accuracy_by_effect_size,
    ci_bound,
    confidence_cld,
    crossing_from_bounds,
    required_n_empirical,
    run_scenario,
)
from .rng import derive_seed, stream_from
from .selection import SelectionConfig, SelectionResult, forward_select

__version__ = "0.1.0"

__all__ = [
    "AccuracyLookup",
    "ConfidenceGrid",
    "CrossingResult",
    "CvEstimate",
    "Dataset",
    "DatasetSpec",
    "EffectProfile",
    "ExpFit",
    "LogisticConfig",
    "McConfig",
    "McSummary",
    "METHODS",
    "PipelineResult",
    "PlaneFit",
    "PowerFit",
    "PowerModel",
    "SelectionConfig",
    "SelectionResult",
    "SplitPlan",
    "TrainedModel",
    "accuracy",
    "accuracy_by_effect_size",
    "adjust_unbalanced",
    "assert_feasible",
    "ci_bound",
    "cohens_d",
    "confidence_cld",
    "consensus_features",
    "crossing_from_bounds",
    "default_power_model",
    "derive_seed",
    "effect_profile",
    "effective_d",
    "equivalent_cohens_d",
    "evaluate_cost",
    "fit_logistic",
    "fit_plane",
    "fit_power_curve",
    "fit_quadratic",
    "fit_two_term_exp",
    "forward_select",
    "gen_gaussian_dataset",
    "mpe",
    "nested_model_confidence",
    "predict",
    "recommended_sample_size",
    "required_n_empirical",
    "required_sample_size",
    "rmse",
    "run_pipeline",
    "run_scenario",
    "split_holdout",
    "split_kfold",
    "split_train_val_test",
    "stream_from",
]
