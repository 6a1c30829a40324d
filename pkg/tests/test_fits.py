import numpy as np
import pytest

from fermimi import (
    FitReport,
    ValidationError,
    fit_exponential_rate,
    fit_log_beta_slope,
    fit_quadratic_coefficient,
)
from fermimi.fits import linear_fit


def test_linear_fit_recovers_exact_line():
    x = np.array([1.0, 2.0, 3.0, 4.0])
    slope, intercept, r2 = linear_fit(x, 2.5 * x - 1.0)
    assert slope == pytest.approx(2.5, abs=1e-12)
    assert intercept == pytest.approx(-1.0, abs=1e-12)
    assert r2 == pytest.approx(1.0, abs=1e-12)


def test_linear_fit_r2_bounded():
    rng = np.random.default_rng(0)
    x = np.linspace(0, 1, 50)
    _, _, r2 = linear_fit(x, rng.standard_normal(50))
    assert 0.0 <= r2 <= 1.0


def test_log_beta_slope():
    betas = np.geomspace(10, 1000, 6)
    report = fit_log_beta_slope(betas, 2.0 * np.log(betas) + 3.0)
    assert report.kind == "log_beta_slope"
    assert report.coefficient == pytest.approx(2.0, abs=1e-10)
    assert report.r_squared == pytest.approx(1.0, abs=1e-12)
    assert report.window == (10.0, 1000.0)


def test_log_beta_slope_window():
    betas = np.array([1.0, 10.0, 100.0, 1000.0])
    values = np.array([100.0, 2.0 * np.log(10.0), 2.0 * np.log(100.0), 2.0 * np.log(1000.0)])
    report = fit_log_beta_slope(betas, values, window=(10.0, 1000.0))
    assert report.coefficient == pytest.approx(2.0, abs=1e-10)


def test_exponential_rate():
    x = np.array([2.0, 4.0, 6.0, 8.0])
    report = fit_exponential_rate(x, 3.0 * np.exp(-1.7 * x))
    assert report.kind == "exp_rate"
    assert report.coefficient == pytest.approx(1.7, abs=1e-10)


def test_exponential_rate_requires_positive_values():
    with pytest.raises(ValidationError):
        fit_exponential_rate([1.0, 2.0], [1.0, 0.0])


def test_quadratic_coefficient_extrapolates_even_series():
    betas = np.array([0.1, 0.05, 0.025])
    c, d, e = 0.72, -0.3, 4.0
    values = c * betas**2 + d * betas**4 + e * betas**6
    report = fit_quadratic_coefficient(betas, values)
    assert report.kind == "quadratic_coeff"
    assert report.coefficient == pytest.approx(c, abs=1e-12)
    assert 0.0 <= report.r_squared <= 1.0


def test_fit_report_validates_r_squared():
    with pytest.raises(ValidationError):
        FitReport("exp_rate", 1.0, 1.5, (0.0, 1.0))


def test_too_few_points():
    with pytest.raises(ValidationError):
        linear_fit([1.0], [2.0])
    with pytest.raises(ValidationError):
        fit_log_beta_slope([1.0, 2.0, 3.0], [1.0, 2.0, 3.0], window=(5.0, 6.0))
