"""Lattice models, dispersion and the thermal symbol of the covariance matrix.

A translationally invariant chain with finite-range couplings ``(v_1, ..., v_r)``
has the real even dispersion

    eps(theta) = d_0 + 2 * sum_{k=1}^{r-1} d_k cos(k theta),

with ``d_0 = v_1`` and ``d_k = v_{k+1}``.  At inverse temperature ``beta`` the
covariance matrix of the Gibbs state is generated by the symbol
``lambda(theta) = f(eps(theta))`` where ``f(x) = -tanh(beta x / 2)`` is the
filling function.  All evaluators are vectorised over ``theta`` and are
2*pi-periodic in it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

__all__ = [
    "ModelSpec",
    "ThermalParams",
    "SymbolFns",
    "dispersion_eval",
    "fermi_function",
    "thermal_symbol",
    "hamiltonian_matrix",
]


def _as_float_tuple(values):
    try:
        out = tuple(float(v) for v in values)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"couplings must be a sequence of reals, got {values!r}") from exc
    if any(not math.isfinite(v) for v in out):
        raise ValidationError("couplings must be finite")
    return out


@dataclass(frozen=True)
class ModelSpec:
    """Finite-range coupling sequence (v_1, ..., v_r) of a fermionic chain."""

    couplings: tuple

    def __post_init__(self):
        object.__setattr__(self, "couplings", _as_float_tuple(self.couplings))
        if len(self.couplings) < 1:
            raise ValidationError("at least one coupling (the on-site term) is required")

    @classmethod
    def xx(cls, a, b):
        """Nearest-neighbour chain: on-site energy ``a``, hopping ``b``."""
        return cls((a, b))

    @property
    def range(self):
        return len(self.couplings)

    @property
    def d_coefficients(self):
        """One-sided coefficients (d_0, ..., d_{r-1}); d_{-k} = d_k by reflection."""
        return self.couplings

    @property
    def dispersion_bound(self):
        """sup_theta |eps(theta)| <= |d_0| + 2 sum_{k>=1} |d_k|."""
        d = self.couplings
        return abs(d[0]) + 2.0 * sum(abs(v) for v in d[1:])


@dataclass(frozen=True)
class ThermalParams:
    """Inverse temperature and Renyi order (alpha = 1 is von Neumann)."""

    beta: float
    alpha: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "beta", float(self.beta))
        object.__setattr__(self, "alpha", float(self.alpha))
        if not (math.isfinite(self.beta) and self.beta > 0):
            raise ValidationError("beta must be positive")
        if not (math.isfinite(self.alpha) and self.alpha >= 0):
            raise ValidationError("alpha must be >= 0")


def _maybe_item(arr, scalar_input):
    return float(arr) if scalar_input else arr


def dispersion_eval(model, theta):
    """Evaluate eps(theta); real, even and 2*pi-periodic."""
    theta_arr = np.asarray(theta, dtype=float)
    scalar = theta_arr.ndim == 0
    d = np.asarray(model.d_coefficients)
    k = np.arange(1, model.range)
    out = np.full_like(theta_arr, d[0], dtype=float)
    if k.size:
        out = out + 2.0 * np.cos(np.multiply.outer(theta_arr, k)) @ d[1:]
    return _maybe_item(out, scalar)


def _dispersion_deriv1(model, theta_arr):
    d = np.asarray(model.d_coefficients)
    k = np.arange(1, model.range)
    if not k.size:
        return np.zeros_like(theta_arr)
    return -2.0 * np.sin(np.multiply.outer(theta_arr, k)) @ (k * d[1:])


def _dispersion_deriv2(model, theta_arr):
    d = np.asarray(model.d_coefficients)
    k = np.arange(1, model.range)
    if not k.size:
        return np.zeros_like(theta_arr)
    return -2.0 * np.cos(np.multiply.outer(theta_arr, k)) @ (k * k * d[1:])


def _sech_sq(x):
    # 4 e^{-2|x|} / (1 + e^{-2|x|})^2, safe against cosh overflow
    e = np.exp(-2.0 * np.abs(x))
    return 4.0 * e / (1.0 + e) ** 2


def fermi_function(x, beta):
    """Filling function f(x) = -tanh(beta x / 2), valued in (-1, 1)."""
    if beta <= 0:
        raise ValidationError("beta must be positive")
    x_arr = np.asarray(x, dtype=float)
    return _maybe_item(-np.tanh(0.5 * beta * x_arr), x_arr.ndim == 0)


@dataclass(frozen=True)
class SymbolFns:
    """Evaluators for lambda(theta) = f(eps(theta)) and its first two theta-derivatives.

    Immutable and reentrant: safe to share across threads.
    """

    model: ModelSpec
    thermal: ThermalParams

    def eval(self, theta):
        theta_arr = np.asarray(theta, dtype=float)
        eps = dispersion_eval(self.model, theta_arr)
        return _maybe_item(-np.tanh(0.5 * self.thermal.beta * np.asarray(eps)), theta_arr.ndim == 0)

    def deriv1(self, theta):
        theta_arr = np.asarray(theta, dtype=float)
        beta = self.thermal.beta
        eps = dispersion_eval(self.model, theta_arr)
        fp = -(beta / 2.0) * _sech_sq(0.5 * beta * np.asarray(eps))
        out = fp * _dispersion_deriv1(self.model, theta_arr)
        return _maybe_item(out, theta_arr.ndim == 0)

    def deriv2(self, theta):
        theta_arr = np.asarray(theta, dtype=float)
        beta = self.thermal.beta
        eps = np.asarray(dispersion_eval(self.model, theta_arr))
        half = 0.5 * beta * eps
        sq = _sech_sq(half)
        fp = -(beta / 2.0) * sq
        fpp = (beta * beta / 2.0) * sq * np.tanh(half)
        de1 = _dispersion_deriv1(self.model, theta_arr)
        de2 = _dispersion_deriv2(self.model, theta_arr)
        return _maybe_item(fpp * de1 * de1 + fp * de2, theta_arr.ndim == 0)

    @property
    def max_abs(self):
        """Strict bound sup_theta |lambda| = tanh(beta * sup|eps| / 2) < 1."""
        return math.tanh(0.5 * self.thermal.beta * self.model.dispersion_bound)


def thermal_symbol(model, thermal):
    """Build the covariance symbol lambda = f o eps for a model at given beta."""
    if not isinstance(model, ModelSpec):
        model = ModelSpec(tuple(model))
    if not isinstance(thermal, ThermalParams):
        raise ValidationError("thermal must be a ThermalParams")
    return SymbolFns(model, thermal)


def hamiltonian_matrix(model, n_sites):
    """Dense circulant Hamiltonian matrix on a ring of ``n_sites``.

    Couplings whose offsets coincide modulo the ring size are accumulated, so
    the circulant spectrum equals the dispersion sampled at the ring momenta
    for every ring size, including rings shorter than twice the range.
    """
    if n_sites < 1:
        raise ValidationError("n_sites must be positive")
    d = model.d_coefficients
    row = np.zeros(n_sites)
    row[0] += d[0]
    for k in range(1, model.range):
        row[k % n_sites] += d[k]
        row[(-k) % n_sites] += d[k]
    idx = np.arange(n_sites)
    return row[(idx[:, None] - idx[None, :]) % n_sites]
