"""Deterministic sample-size and model-confidence calculators.

The closed-form path evaluates n_r = a*D**b + c with (a, b, c) read off
affine planes in (l, m).  The lookup path interpolates the shipped
confidence grid.  Both use the shipped coefficients by default but accept
a re-fitted :class:`PowerModel` (see :meth:`PowerModel.to_json` /
:meth:`PowerModel.from_json`).
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import tables
from .curvefit import PlaneFit
from .errors import ExtrapolationWarning, GridRangeError, TargetUnreachableError


def _ceil_pairs(x: float) -> int:
    # Ceiling with a one-nano guard so float fuzz on exact integers does
    # not bump the answer up a whole pair.
    return max(1, math.ceil(x - 1e-9))


@dataclass(frozen=True)
class ConfidenceGrid:
    """C_{2,2} percentages on an (m, D, n) grid."""

    m_values: tuple[int, ...]
    d_values: tuple[float, ...]
    n_values: tuple[int, ...]
    percent: np.ndarray = field(repr=False)  # shape (m, n, d)

    def __post_init__(self):
        expected = (len(self.m_values), len(self.n_values), len(self.d_values))
        if self.percent.shape != expected:
            raise ValueError(f"grid shape {self.percent.shape} != {expected}")
        if np.any(self.percent < 0) or np.any(self.percent > 100):
            raise ValueError("grid entries must be percentages in [0, 100]")


@dataclass(frozen=True)
class PowerModel:
    """Plane coefficients for (a, b, c) plus the confidence grid."""

    plane_a: PlaneFit
    plane_b: PlaneFit
    plane_c: PlaneFit
    grid: ConfidenceGrid

    def coefficients(self, l0: float, m0: float) -> tuple[float, float, float]:
        return (
            float(self.plane_a.predict(l0, m0)),
            float(self.plane_b.predict(l0, m0)),
            float(self.plane_c.predict(l0, m0)),
        )

    def to_json(self) -> str:
        payload = {
            "plane_a": [self.plane_a.intercept, self.plane_a.coef_l, self.plane_a.coef_m],
            "plane_b": [self.plane_b.intercept, self.plane_b.coef_l, self.plane_b.coef_m],
            "plane_c": [self.plane_c.intercept, self.plane_c.coef_l, self.plane_c.coef_m],
            "confidence_grid": {
                "m_values": list(self.grid.m_values),
                "d_values": list(self.grid.d_values),
                "n_values": list(self.grid.n_values),
                "c22_percent": self.grid.percent.tolist(),
            },
        }
        return json.dumps(payload, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "PowerModel":
        payload = json.loads(text)
        grid = payload["confidence_grid"]
        return cls(
            plane_a=PlaneFit(*payload["plane_a"]),
            plane_b=PlaneFit(*payload["plane_b"]),
            plane_c=PlaneFit(*payload["plane_c"]),
            grid=ConfidenceGrid(
                m_values=tuple(int(v) for v in grid["m_values"]),
                d_values=tuple(float(v) for v in grid["d_values"]),
                n_values=tuple(int(v) for v in grid["n_values"]),
                percent=np.asarray(grid["c22_percent"], dtype=np.float64),
            ),
        )

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_json() + "\n")

    @classmethod
    def load(cls, path) -> "PowerModel":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_json(fh.read())


def default_power_model() -> PowerModel:
    percent = np.empty((4, 10, 7))
    for mi in range(4):
        percent[mi] = np.asarray(tables.C22_PERCENT[mi])
    return PowerModel(
        plane_a=PlaneFit(*tables.PLANE_A),
        plane_b=PlaneFit(*tables.PLANE_B),
        plane_c=PlaneFit(*tables.PLANE_C),
        grid=ConfidenceGrid(
            m_values=tables.GRID_M_VALUES,
            d_values=tables.GRID_D_VALUES,
            n_values=tables.GRID_N_VALUES,
            percent=percent,
        ),
    )


_DEFAULT = None


def _model_or_default(model: PowerModel | None) -> PowerModel:
    global _DEFAULT
    if model is not None:
        return model
    if _DEFAULT is None:
        _DEFAULT = default_power_model()
    return _DEFAULT


def required_sample_size(d0: float, m0: int, l0: int, model: PowerModel | None = None) -> int:
    """Pairs per class needed for a significant outcome (5% level, 80% power).

    Evaluates the closed-form model and returns the ceiling.  Outside the
    fitted ranges (l0 in 2..4, d0 in 0.4..1.4) the value is still
    computed but an :class:`ExtrapolationWarning` is attached.
    """
    model = _model_or_default(model)
    if d0 <= 0:
        raise ValueError("d0 must be positive")
    if l0 < 2:
        raise ValueError("l0 must be >= 2")
    if m0 < l0:
        raise ValueError("m0 must be >= l0")
    a, b, c = model.coefficients(l0, m0)
    n_r = a * d0**b + c
    if l0 > max(tables.L_FITTED):
        warnings.warn(
            f"l0={l0} lies outside the fitted range {tables.L_FITTED}; expect "
            f"mean percent errors around {tables.EXTRAPOLATION_MPE_PERCENT}% "
            f"(versus {tables.INTERPOLATION_MPE_PERCENT}% inside the range)",
            ExtrapolationWarning,
        )
    lo_d, hi_d = tables.D_FITTED_RANGE
    if not lo_d <= d0 <= hi_d:
        warnings.warn(
            f"d0={d0} lies outside the fitted effect-size range [{lo_d}, {hi_d}]; "
            "the estimate is an extrapolation",
            ExtrapolationWarning,
        )
    if n_r <= 0:
        warnings.warn(
            f"model evaluates to a non-positive size ({n_r:.3g}); clamped to 1 pair",
            ExtrapolationWarning,
        )
        return 1
    return _ceil_pairs(n_r)


def _interp_weights(grid_values, query, axis_name):
    values = np.asarray(grid_values, dtype=np.float64)
    if query < values[0] or query > values[-1]:
        raise GridRangeError(
            f"{axis_name}={query} outside grid range [{values[0]:g}, {values[-1]:g}]"
        )
    hi = int(np.searchsorted(values, query, side="left"))
    if hi == 0:
        return 0, 0, 0.0
    lo = hi - 1
    t = (query - values[lo]) / (values[hi] - values[lo])
    return lo, hi, float(t)


def _confidence_curve_over_n(grid: ConfidenceGrid, d0: float, m0: float) -> np.ndarray:
    """Interpolate the m and D axes, leaving the curve over the n grid."""
    mlo, mhi, tm = _interp_weights(grid.m_values, m0, "m0")
    dlo, dhi, td = _interp_weights(grid.d_values, d0, "d0")
    p = grid.percent
    slab = (1 - tm) * p[mlo] + tm * p[mhi]        # (n, d)
    return (1 - td) * slab[:, dlo] + td * slab[:, dhi]


def nested_model_confidence(d0: float, m0: float, n0: float, model: PowerModel | None = None) -> float:
    """Trilinear interpolation of the confidence grid; grid points exact."""
    model = _model_or_default(model)
    curve = _confidence_curve_over_n(model.grid, d0, m0)
    nlo, nhi, tn = _interp_weights(model.grid.n_values, n0, "n0")
    return float((1 - tn) * curve[nlo] + tn * curve[nhi])


def recommended_sample_size(
    d0: float, m0: float, target_c22: float, model: PowerModel | None = None
) -> int:
    """Pairs per class to reach a target confidence, by linear interpolation.

    The confidence-versus-n curve (after interpolating m and D) is walked
    for its first upward crossing of the target; the crossing is rounded
    to the nearest integer.  A target above the curve's value at the
    largest n raises :class:`TargetUnreachableError`.
    """
    model = _model_or_default(model)
    if not 0.0 < target_c22 <= 100.0:
        raise ValueError("target_c22 must be in (0, 100]")
    curve = _confidence_curve_over_n(model.grid, d0, m0)
    n_values = model.grid.n_values
    if target_c22 <= curve[0]:
        return int(n_values[0])
    if target_c22 > curve.max():
        raise TargetUnreachableError(
            f"target C22={target_c22:g}% unreachable; the curve reaches "
            f"{curve[-1]:g}% at n={n_values[-1]}, the largest tabulated size",
            max_achievable=float(curve[-1]),
        )
    for i in range(len(n_values) - 1):
        if curve[i] < target_c22 <= curve[i + 1]:
            t = (target_c22 - curve[i]) / (curve[i + 1] - curve[i])
            crossing = n_values[i] + t * (n_values[i + 1] - n_values[i])
            return int(math.floor(crossing + 0.5))
    raise TargetUnreachableError(
        f"target C22={target_c22:g}% unreachable along the n grid",
        max_achievable=float(curve[-1]),
    )


def adjust_unbalanced(n_r: int, gamma_db: float) -> tuple[int, int]:
    """Per-class sizes when n_r is the average class size of an unbalanced
    design with larger/smaller ratio gamma_db; each side rounds up."""
    if n_r < 1:
        raise ValueError("n_r must be >= 1")
    if gamma_db < 1:
        raise ValueError("gamma_db must be >= 1 (pass the larger/smaller ratio)")
    n_small = _ceil_pairs(n_r * 2.0 / (1.0 + gamma_db))
    n_large = _ceil_pairs(n_r * 2.0 * gamma_db / (1.0 + gamma_db))
    return n_small, n_large


def effective_d(d: float, gamma_d: float) -> float:
    """Average effect size of two features whose ratio is gamma_d."""
    if d <= 0:
        raise ValueError("d must be positive")
    if gamma_d < 1:
        raise ValueError("gamma_d must be >= 1")
    return d * (gamma_d + 1.0) / 2.0


@dataclass(frozen=True)
class AccuracyLookup:
    """Accuracy-versus-effect-size curves per (m, n) cell.

    Cells map (m, n) to (d_values, accuracies), both strictly increasing,
    as produced by a calibration campaign of the nested pipeline.
    """

    cells: dict[tuple[int, int], tuple[tuple[float, ...], tuple[float, ...]]]

    def __post_init__(self):
        for key, (ds, accs) in self.cells.items():
            if len(ds) != len(accs) or len(ds) < 2:
                raise ValueError(f"cell {key}: need matching d/accuracy arrays (>= 2 points)")
            if not all(b > a for a, b in zip(ds, ds[1:])):
                raise ValueError(f"cell {key}: d values must be strictly increasing")
            if not all(b > a for a, b in zip(accs, accs[1:])):
                raise ValueError(
                    f"cell {key}: accuracies must be strictly increasing; rerun the "
                    "calibration with more repetitions"
                )

    def to_json(self) -> str:
        payload = [
            {"m": m, "n": n, "d_values": list(ds), "accuracies": list(accs)}
            for (m, n), (ds, accs) in sorted(self.cells.items())
        ]
        return json.dumps(payload, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "AccuracyLookup":
        payload = json.loads(text)
        return cls(
            cells={
                (int(c["m"]), int(c["n"])): (
                    tuple(float(v) for v in c["d_values"]),
                    tuple(float(v) for v in c["accuracies"]),
                )
                for c in payload
            }
        )


def equivalent_cohens_d(
    observed_accuracy: float, m: int, n: int, lookup: AccuracyLookup
) -> float:
    """Effect size of the Gaussian reference problem matching an accuracy.

    Inverse linear interpolation of the cell's monotone accuracy(D)
    curve; accuracies outside the tabulated range raise GridRangeError.
    """
    key = (int(m), int(n))
    if key not in lookup.cells:
        raise GridRangeError(f"lookup has no cell for (m={m}, n={n})")
    ds, accs = lookup.cells[key]
    if not accs[0] <= observed_accuracy <= accs[-1]:
        raise GridRangeError(
            f"accuracy {observed_accuracy:g} outside tabulated range "
            f"[{accs[0]:g}, {accs[-1]:g}] for (m={m}, n={n})"
        )
    return float(np.interp(observed_accuracy, np.asarray(accs), np.asarray(ds)))
