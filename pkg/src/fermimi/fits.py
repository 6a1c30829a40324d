"""Least-squares fits and extrapolations used by the scan drivers."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

__all__ = [
    "FitReport",
    "linear_fit",
    "fit_log_beta_slope",
    "fit_exponential_rate",
    "fit_quadratic_coefficient",
]


@dataclass(frozen=True)
class FitReport:
    kind: str  # log_beta_slope | exp_rate | quadratic_coeff
    coefficient: float
    r_squared: float
    window: tuple

    def __post_init__(self):
        if not (0.0 <= self.r_squared <= 1.0):
            raise ValidationError(f"r_squared = {self.r_squared!r} outside [0, 1]")


def linear_fit(x, y):
    """Ordinary least squares y ~ slope * x + intercept; returns (slope, intercept, r2)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1 or x.size < 2:
        raise ValidationError("need two same-length 1-d arrays with at least 2 points")
    design = np.vstack([x, np.ones_like(x)]).T
    (slope, intercept), *_ = np.linalg.lstsq(design, y, rcond=None)
    residual = y - (slope * x + intercept)
    total = float(np.sum((y - np.mean(y)) ** 2))
    r2 = 1.0 if total == 0.0 else 1.0 - float(np.sum(residual**2)) / total
    return float(slope), float(intercept), float(min(max(r2, 0.0), 1.0))


def _apply_window(x, y, window):
    if window is None:
        return x, y, (float(np.min(x)), float(np.max(x)))
    lo, hi = float(window[0]), float(window[1])
    keep = (x >= lo) & (x <= hi)
    if int(np.sum(keep)) < 2:
        raise ValidationError(f"fit window ({lo:g}, {hi:g}) keeps fewer than 2 points")
    return x[keep], y[keep], (lo, hi)


def fit_log_beta_slope(betas, values, window=None):
    """Slope of ``values`` against ln(beta) over an explicit beta window."""
    x = np.asarray(betas, dtype=float)
    y = np.asarray(values, dtype=float)
    x, y, window = _apply_window(x, y, window)
    slope, _, r2 = linear_fit(np.log(x), y)
    return FitReport("log_beta_slope", slope, r2, window)


def fit_exponential_rate(xs, values, window=None):
    """Decay rate kappa of values ~ C exp(-kappa x), from ln(values) against x."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(values, dtype=float)
    if np.any(y <= 0):
        raise ValidationError("exponential-rate fit needs strictly positive values")
    x, y, window = _apply_window(x, y, window)
    slope, _, r2 = linear_fit(x, np.log(y))
    return FitReport("exp_rate", -slope, r2, window)


def fit_quadratic_coefficient(betas, values):
    """Extrapolate values/beta^2 to beta -> 0, assuming an expansion in beta^2.

    Polynomial (Neville) extrapolation in h = beta^2 of y = values/beta^2 to
    h = 0; the reported r^2 is the diagnostic of the plain linear fit of y
    against h over the same points.
    """
    x = np.asarray(betas, dtype=float)
    y = np.asarray(values, dtype=float)
    if x.ndim != 1 or x.shape != y.shape or x.size < 2:
        raise ValidationError("need two same-length 1-d arrays with at least 2 points")
    if np.any(x <= 0):
        raise ValidationError("beta values must be positive")
    order = np.argsort(x)
    h = (x[order] ** 2).astype(float)
    tableau = list(y[order] / h)
    m = len(tableau)
    for level in range(1, m):
        nxt = []
        for i in range(m - level):
            num = h[i] * tableau[i + 1] - h[i + level] * tableau[i]
            nxt.append(num / (h[i] - h[i + level]))
        tableau = nxt
    _, _, r2 = linear_fit(h, y[order] / h)
    limit = tableau[0]
    if not math.isfinite(limit):
        raise ValidationError("extrapolation produced a non-finite value")
    return FitReport("quadratic_coeff", float(limit), r2, (float(x.min()), float(x.max())))
