import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fermimi import (
    ModelSpec,
    ThermalParams,
    ValidationError,
    dispersion_eval,
    fermi_function,
    hamiltonian_matrix,
    thermal_symbol,
)

XX = ModelSpec.xx(1.0, 1.0)

st_couplings = st.lists(st.floats(-3, 3), min_size=1, max_size=4).map(tuple)
st_beta = st.floats(0.05, 20)
st_theta = st.floats(-10, 10)


def test_dispersion_xx_values():
    assert dispersion_eval(XX, 0.0) == pytest.approx(3.0, abs=1e-12)
    assert dispersion_eval(XX, math.pi) == pytest.approx(-1.0, abs=1e-12)
    assert dispersion_eval(XX, math.pi / 2) == pytest.approx(1.0, abs=1e-12)


def test_dispersion_vectorised():
    thetas = np.linspace(-np.pi, np.pi, 7)
    vals = dispersion_eval(XX, thetas)
    assert vals.shape == thetas.shape
    assert vals[0] == pytest.approx(dispersion_eval(XX, float(thetas[0])))


def test_fermi_function_values():
    assert fermi_function(0.0, 3.0) == 0.0
    assert fermi_function(2.0, 1.0) == pytest.approx(-math.tanh(1.0))
    assert fermi_function(2.0, 1.0) == pytest.approx(-0.761594, abs=1e-6)
    assert abs(fermi_function(1.0, 50.0) + 1.0) < 1e-10


def test_fermi_function_odd_and_monotone():
    xs = np.linspace(-4, 4, 41)
    vals = fermi_function(xs, 1.7)
    assert np.allclose(vals, -fermi_function(-xs, 1.7), atol=1e-15)
    assert np.all(np.diff(vals) < 0)
    assert np.all(np.abs(vals) < 1)


def test_symbol_composition_at_pi():
    sym = thermal_symbol(XX, ThermalParams(2.0))
    assert sym.eval(math.pi) == pytest.approx(math.tanh(1.0))


def test_deriv1_vanishes_at_symmetry_points():
    sym = thermal_symbol(ModelSpec((0.7, -1.3, 0.4)), ThermalParams(1.9))
    assert abs(sym.deriv1(0.0)) < 1e-12
    assert abs(sym.deriv1(math.pi)) < 1e-12


@pytest.mark.parametrize("beta", [0.5, 2.0, 8.0])
def test_derivatives_match_finite_differences(beta):
    sym = thermal_symbol(ModelSpec((0.5, 1.0, -0.3)), ThermalParams(beta))
    thetas = np.linspace(0.3, 2.9, 9)
    h1 = 1e-5
    fd1 = (sym.eval(thetas + h1) - sym.eval(thetas - h1)) / (2 * h1)
    assert np.allclose(sym.deriv1(thetas), fd1, rtol=1e-6, atol=1e-9)
    h2 = 1e-4
    fd2 = (sym.eval(thetas + h2) - 2 * sym.eval(thetas) + sym.eval(thetas - h2)) / h2**2
    assert np.allclose(sym.deriv2(thetas), fd2, rtol=1e-5, atol=1e-7)


def test_parity_on_grid():
    sym = thermal_symbol(ModelSpec((1.0, 0.8, 0.2)), ThermalParams(3.0))
    thetas = np.linspace(0.05, 3.1, 25)
    assert np.allclose(sym.eval(thetas), sym.eval(-thetas), atol=1e-12)
    assert np.allclose(sym.deriv1(thetas), -sym.deriv1(-thetas), atol=1e-12)
    assert np.allclose(sym.deriv2(thetas), sym.deriv2(-thetas), atol=1e-12)


@given(st_couplings, st_beta, st_theta)
def test_symbol_strictly_inside_unit_interval(couplings, beta, theta):
    sym = thermal_symbol(ModelSpec(couplings), ThermalParams(beta))
    value = sym.eval(theta)
    # the bound is attained at theta = 0 for a constant dispersion; it is
    # mathematically < 1 but tanh saturates to 1.0 in fp64 once beta is large
    assert abs(value) <= sym.max_abs + 1e-15
    assert sym.max_abs <= 1.0
    if 0.5 * beta * sym.model.dispersion_bound < 19.0:
        assert sym.max_abs < 1.0


@given(st_couplings, st_beta, st_theta)
def test_symbol_periodic_and_even(couplings, beta, theta):
    sym = thermal_symbol(ModelSpec(couplings), ThermalParams(beta))
    assert sym.eval(theta + 2 * math.pi) == pytest.approx(sym.eval(theta), abs=1e-10)
    assert sym.eval(-theta) == pytest.approx(sym.eval(theta), abs=1e-12)


def test_large_beta_derivatives_are_finite():
    sym = thermal_symbol(XX, ThermalParams(1000.0))
    thetas = np.linspace(-np.pi, np.pi, 101)
    for arr in (sym.eval(thetas), sym.deriv1(thetas), sym.deriv2(thetas)):
        assert np.all(np.isfinite(arr))


def test_validation():
    with pytest.raises(ValidationError):
        ModelSpec(())
    with pytest.raises(ValidationError):
        ModelSpec((1.0, float("nan")))
    with pytest.raises(ValidationError):
        ThermalParams(0.0)
    with pytest.raises(ValidationError):
        ThermalParams(-1.0)
    with pytest.raises(ValidationError):
        ThermalParams(1.0, -0.5)


def test_hamiltonian_matrix_wraps_short_rings():
    v = hamiltonian_matrix(ModelSpec.xx(0.0, 1.0), 2)
    assert np.array_equal(v, np.array([[0.0, 2.0], [2.0, 0.0]]))


def test_hamiltonian_matrix_spectrum_matches_dispersion():
    model = ModelSpec((0.5, 1.0, -0.3))
    for n in (2, 4, 6, 12):
        v = hamiltonian_matrix(model, n)
        assert np.array_equal(v, v.T)
        momenta = 2 * np.pi * np.arange(n) / n
        expected = np.sort(dispersion_eval(model, momenta))
        assert np.allclose(np.sort(np.linalg.eigvalsh(v)), expected, atol=1e-10)
