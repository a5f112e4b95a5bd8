"""Curve fitting and error metrics.

Nonlinear fits (two-term exponential, shifted power curve) run a damped
Gauss-Newton (Levenberg-Marquardt) solver from a fixed multi-start
schedule, so results are deterministic for identical inputs.  Because the
two-term exponential is symmetric under exchanging its terms, fits are
compared by predictions and residuals, never by raw parameters.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateFitWarning, DegenerateInputError, FitFailureError

STEP_TOL = 1e-9
_MU_MIN = 1e-14
_MU_MAX = 1e14


def _levenberg_marquardt(residual_jacobian, theta0, max_iter=300):
    """Minimize ||r(theta)||^2; returns (theta, sse, converged).

    converged=True means the proposed parameter step fell below STEP_TOL
    (max-norm).  Steps produce non-finite residuals are rejected through
    the damping schedule.
    """
    theta = np.array(theta0, dtype=np.float64)
    r, J = residual_jacobian(theta)
    if not (np.isfinite(r).all() and np.isfinite(J).all()):
        return theta, np.inf, False
    sse = float(r @ r)
    mu = 1e-3
    converged = False
    for _ in range(max_iter):
        if sse == 0.0:
            converged = True
            break
        A = J.T @ J
        g = J.T @ r
        scale = np.maximum(np.diag(A), 1e-12)
        accepted = False
        for _damp in range(60):
            try:
                delta = np.linalg.solve(A + mu * np.diag(scale), -g)
            except np.linalg.LinAlgError:
                mu = min(mu * 10.0, _MU_MAX)
                continue
            if np.max(np.abs(delta)) < STEP_TOL:
                converged = True
                break
            trial = theta + delta
            r_new, J_new = residual_jacobian(trial)
            if np.isfinite(r_new).all() and np.isfinite(J_new).all():
                sse_new = float(r_new @ r_new)
                if sse_new < sse:
                    theta, r, J, sse = trial, r_new, J_new, sse_new
                    mu = max(mu / 8.0, _MU_MIN)
                    accepted = True
                    break
            mu = min(mu * 10.0, _MU_MAX)
            if mu >= _MU_MAX:
                break
        if converged or not accepted:
            break
    return theta, sse, converged


@dataclass(frozen=True)
class ExpFit:
    """y = t1*exp(t2*x) + t3*exp(t4*x)."""

    theta: tuple[float, float, float, float]
    residual_rmse: float
    converged: bool

    def predict(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        t1, t2, t3, t4 = self.theta
        return t1 * np.exp(t2 * x) + t3 * np.exp(t4 * x)


@dataclass(frozen=True)
class PowerFit:
    """y = a*x**b + c."""

    a: float
    b: float
    c: float
    residual_rmse: float

    def predict(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        return self.a * np.power(x, self.b) + self.c


@dataclass(frozen=True)
class PlaneFit:
    """value = intercept + coef_l*l + coef_m*m."""

    intercept: float
    coef_l: float
    coef_m: float

    def predict(self, l, m) -> float | np.ndarray:
        return self.intercept + self.coef_l * np.asarray(l) + self.coef_m * np.asarray(m)


def _check_xy(x, y, min_points):
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.ndim != 1 or y.ndim != 1 or x.shape != y.shape:
        raise ValueError("x and y must be equal-length 1-D arrays")
    if x.size < min_points:
        raise ValueError(f"need at least {min_points} points, got {x.size}")
    if not (np.isfinite(x).all() and np.isfinite(y).all()):
        raise ValueError("x and y must be finite")
    return x, y


def fit_two_term_exp(x, y) -> ExpFit:
    """Least-squares two-term exponential through (x, y).

    Eight starts cover sign and scale combinations of the two rates; the
    linear amplitudes are initialized by least squares at each start.
    The lowest-residual run wins.
    """
    x, y = _check_xy(x, y, 5)
    if not np.all(np.diff(x) > 0):
        raise ValueError("x must be strictly increasing")

    def residual_jacobian(theta):
        t1, t2, t3, t4 = theta
        with np.errstate(over="ignore", invalid="ignore"):
            e2 = np.exp(t2 * x)
            e4 = np.exp(t4 * x)
            r = t1 * e2 + t3 * e4 - y
            J = np.column_stack((e2, t1 * x * e2, e4, t3 * x * e4))
        return r, J

    rate = 1.0 / (x[-1] - x[0])
    best = None
    for s2 in (-1.0, 1.0):
        for s4 in (-1.0, 1.0):
            for mag in (1.0, 0.1):
                t2 = s2 * mag * rate
                t4 = s4 * mag * rate / 100.0
                basis = np.column_stack((np.exp(t2 * x), np.exp(t4 * x)))
                amp, *_ = np.linalg.lstsq(basis, y, rcond=None)
                theta0 = np.array([amp[0], t2, amp[1], t4])
                theta, sse, converged = _levenberg_marquardt(residual_jacobian, theta0)
                if np.isfinite(sse) and (best is None or sse < best[1]):
                    best = (theta, sse, converged)
    if best is None:
        raise FitFailureError("no start produced a finite two-term exponential fit")
    theta, sse, converged = best
    return ExpFit(
        theta=tuple(float(t) for t in theta),
        residual_rmse=float(np.sqrt(sse / x.size)),
        converged=bool(converged),
    )


def fit_quadratic(x, y) -> np.ndarray:
    """Ordinary least squares for y ~ c0 + c1*x + c2*x**2 (ascending order)."""
    x, y = _check_xy(x, y, 3)
    if np.unique(x).size < 3:
        raise FitFailureError("need at least 3 distinct x values for a quadratic")
    design = np.column_stack((np.ones_like(x), x, x * x))
    coeffs, _res, rank, _sv = np.linalg.lstsq(design, y, rcond=None)
    if rank < 3:
        raise FitFailureError("rank-deficient design for quadratic fit")
    return coeffs


def fit_power_curve(d_values, n_values) -> PowerFit:
    """Least squares for n ~ a*d**b + c over positive, increasing d."""
    x, y = _check_xy(d_values, n_values, 4)
    if x.min() <= 0:
        raise ValueError("d values must be positive")
    if not np.all(np.diff(x) > 0):
        raise ValueError("d values must be strictly increasing")
    logx = np.log(x)

    def residual_jacobian(theta):
        a, b, c = theta
        with np.errstate(over="ignore", invalid="ignore"):
            xb = np.exp(b * logx)
            r = a * xb + c - y
            J = np.column_stack((xb, a * logx * xb, np.ones_like(x)))
        return r, J

    best = None
    for b0 in (-3.0, -2.0, -1.0, -0.5, 0.5, 1.0, 2.0, 3.0):
        basis = np.column_stack((np.power(x, b0), np.ones_like(x)))
        amp, *_ = np.linalg.lstsq(basis, y, rcond=None)
        theta0 = np.array([amp[0], b0, amp[1]])
        theta, sse, converged = _levenberg_marquardt(residual_jacobian, theta0)
        if np.isfinite(sse) and (best is None or sse < best[1]):
            best = (theta, sse, converged)
    if best is None:
        raise FitFailureError("no start produced a finite power-curve fit")
    theta, sse, _converged = best
    fit = PowerFit(
        a=float(theta[0]),
        b=float(theta[1]),
        c=float(theta[2]),
        residual_rmse=float(np.sqrt(sse / x.size)),
    )
    if np.ptp(y) == 0.0:
        warnings.warn(
            "constant data leave the power-curve exponent unidentified",
            DegenerateFitWarning,
        )
    elif fit.b >= 0:
        warnings.warn(
            f"fitted exponent b={fit.b:.4g} is non-negative; required-n curves "
            "normally decrease with effect size",
            DegenerateFitWarning,
        )
    return fit


def fit_plane(points) -> PlaneFit:
    """Ordinary least squares for value ~ intercept + coef_l*l + coef_m*m.

    ``points`` is an iterable of ((l, m), value) pairs; the (l, m) design
    must not be collinear.
    """
    pts = list(points)
    if len(pts) < 3:
        raise ValueError("need at least 3 points to fit a plane")
    lm = np.array([p[0] for p in pts], dtype=np.float64)
    values = np.array([p[1] for p in pts], dtype=np.float64)
    design = np.column_stack((np.ones(len(pts)), lm[:, 0], lm[:, 1]))
    coeffs, _res, rank, _sv = np.linalg.lstsq(design, values, rcond=None)
    if rank < 3:
        raise FitFailureError("collinear (l, m) design; plane is not identified")
    return PlaneFit(intercept=float(coeffs[0]), coef_l=float(coeffs[1]), coef_m=float(coeffs[2]))


def rmse(predicted, actual) -> float:
    """Root-mean-square error."""
    p = np.asarray(predicted, dtype=np.float64)
    a = np.asarray(actual, dtype=np.float64)
    if p.shape != a.shape or p.size == 0:
        raise ValueError("predicted and actual must be equal-length, non-empty")
    return float(np.sqrt(np.mean(np.square(p - a))))


def mpe(predicted, actual) -> float:
    """Mean percent magnitude error: 100 * mean(|pred - actual| / |actual|)."""
    p = np.asarray(predicted, dtype=np.float64)
    a = np.asarray(actual, dtype=np.float64)
    if p.shape != a.shape or p.size == 0:
        raise ValueError("predicted and actual must be equal-length, non-empty")
    if np.any(a == 0):
        raise DegenerateInputError("actual contains zeros; percent error undefined")
    return float(100.0 * np.mean(np.abs(p - a) / np.abs(a)))
