"""Asymptotic mutual information via a regularised 2-d periodic quadrature.

In the double-scaling limit the mutual information of the bisected ring is a
double integral over two momentum angles of

    D(theta, phi) * (lambda'(phi) - lambda'(theta)) / tan((phi - theta) / 2),

where D is the difference quotient of s_alpha along the symbol.  Both factors
have removable singularities: D degenerates where the symbol takes equal
values, the second factor on the angle diagonal.  Both are replaced by their
first-order expansions inside small configurable windows, so the integrand is
total and smooth, and the tensor-product rectangle rule (with the phi grid
offset by half a cell so no node hits the diagonal) converges exponentially.

The orientation of the tangent factor is fixed so the result is nonnegative
and matches the exact finite-ring computation; a unit test pins it.

The same engine evaluates the kernel-truncated form, where the tangent factor
is replaced by the closed-form sine-sum kernel K_n.  Its convergence in the
truncation order is slow and oscillatory at low temperature, which is the
practical reason to prefer the closed formula.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .entropy import s_alpha, s_alpha_deriv
from .errors import ConvergenceError, ValidationError
from .models import thermal_symbol

__all__ = [
    "QuadratureConfig",
    "WidomResult",
    "mi_integrand",
    "mutual_info_asymptotic",
    "mutual_info_kernel_truncated",
    "kernel_K",
]

# midpoints of the regularised difference quotient stay strictly inside (-1, 1)
_UNIT_GUARD = 1.0 - 1e-15
_ROW_CHUNK = 256


@dataclass(frozen=True)
class QuadratureConfig:
    """Grid-doubling tensor-product rectangle rule parameters."""

    grid: int = 64
    tol: float = 1e-8
    lambda_match_eps: float = 1e-8
    angle_eps: float = 1e-6
    grid_ceiling: int = 2**13

    def __post_init__(self):
        if self.grid < 8 or self.grid % 2:
            raise ValidationError("grid must be an even integer >= 8")
        if not self.tol > 0:
            raise ValidationError("tol must be positive")
        if not (self.lambda_match_eps > 0 and self.angle_eps > 0):
            raise ValidationError("regularisation thresholds must be positive")
        if self.grid_ceiling < 2 * self.grid:
            raise ValidationError("grid_ceiling must allow at least one doubling")


@dataclass(frozen=True)
class WidomResult:
    value: float
    grid_used: int
    est_error: float


def _wrap_angle(x):
    """Reduce to (-pi, pi]."""
    return np.pi - np.mod(np.pi - np.asarray(x, dtype=float), 2.0 * np.pi)


def _difference_quotient(lam_t, s_t, lam_p, s_p, alpha, eps):
    """(s(lam_t) - s(lam_p)) / (lam_t - lam_p), switching to s' at matched values."""
    delta = lam_t - lam_p
    close = np.abs(delta) < eps
    out = (s_t - s_p) / np.where(close, 1.0, delta)
    if np.any(close):
        lt, lp = np.broadcast_arrays(lam_t, lam_p)
        mid = np.clip(0.5 * (lt[close] + lp[close]), -_UNIT_GUARD, _UNIT_GUARD)
        out[close] = s_alpha_deriv(mid, alpha)
    return out


def mi_integrand(symbol, alpha, theta, phi, cfg=QuadratureConfig()):
    """Integrand of the asymptotic formula at angles (theta, phi); total on R^2.

    On the diagonal it takes its analytic limit
    2 * s_alpha'(lambda(theta)) * lambda''(theta).
    """
    theta_arr = np.asarray(theta, dtype=float)
    phi_arr = np.asarray(phi, dtype=float)
    scalar = theta_arr.ndim == 0 and phi_arr.ndim == 0
    theta_b, phi_b = np.broadcast_arrays(np.atleast_1d(theta_arr), np.atleast_1d(phi_arr))
    lam_t, lam_p = symbol.eval(theta_b), symbol.eval(phi_b)
    quot = _difference_quotient(
        lam_t, s_alpha(lam_t, alpha), lam_p, s_alpha(lam_p, alpha), alpha, cfg.lambda_match_eps
    )
    dtheta = phi_b - theta_b
    wrapped = _wrap_angle(dtheta)
    near = np.abs(wrapped) < cfg.angle_eps
    tang = (symbol.deriv1(phi_b) - symbol.deriv1(theta_b)) / np.where(near, 1.0, np.tan(0.5 * dtheta))
    if np.any(near):
        # first-order expansion: numerator ~ lambda''(mid) * d, tan(d/2) ~ d/2
        mid = theta_b + 0.5 * wrapped
        tang[near] = 2.0 * np.asarray(symbol.deriv2(mid[near]))
    out = quot * tang
    return float(out.reshape(-1)[0]) if scalar else out.reshape(np.broadcast_shapes(theta_arr.shape, phi_arr.shape))


def kernel_K(n, phi, angle_eps=1e-6):
    """Closed form of sum_{k=1}^{n} sin(k phi).

    Near phi = 0 (mod 2 pi) the closed form is 0/0; there the finite sine sum
    is evaluated directly (its value at 0 is exactly 0).
    """
    n = int(n)
    if n < 1:
        raise ValidationError("kernel order must be >= 1")
    phi_arr = np.asarray(phi, dtype=float)
    scalar = phi_arr.ndim == 0
    wrapped = np.atleast_1d(_wrap_angle(phi_arr))
    near = np.abs(wrapped) < angle_eps
    safe = np.where(near, 1.0, wrapped)
    out = (np.cos(0.5 * safe) - np.cos((n + 0.5) * safe)) / (2.0 * np.sin(0.5 * safe))
    if np.any(near):
        out[near] = np.sin(np.multiply.outer(wrapped[near], np.arange(1.0, n + 1.0))).sum(axis=-1)
    return float(out[0]) if scalar else out.reshape(phi_arr.shape)


def _grid_pair(n):
    step = 2.0 * np.pi / n
    theta = -np.pi + step * np.arange(n)
    phi = -np.pi + step * (np.arange(n) + 0.5)  # half-cell offset: never hits theta
    return theta, phi


def _pair_sum(symbol, alpha, n, cfg, kernel_order=None):
    """Deterministic chunked double sum of the integrand over the n x n grid."""
    theta, phi = _grid_pair(n)
    lam_t, lam_p = symbol.eval(theta), symbol.eval(phi)
    s_t, s_p = s_alpha(lam_t, alpha), s_alpha(lam_p, alpha)
    dl_t, dl_p = symbol.deriv1(theta), symbol.deriv1(phi)
    partials = []
    for start in range(0, n, _ROW_CHUNK):
        rows = slice(start, min(start + _ROW_CHUNK, n))
        quot = _difference_quotient(
            lam_t[rows][:, None], s_t[rows][:, None], lam_p[None, :], s_p[None, :],
            alpha, cfg.lambda_match_eps,
        )
        dtheta = phi[None, :] - theta[rows][:, None]
        diff1 = dl_p[None, :] - dl_t[rows][:, None]
        if kernel_order is None:
            # the half-cell offset keeps |phi - theta| >= step/2 > angle_eps,
            # so the diagonal branch cannot trigger on grid nodes
            factor = diff1 / np.tan(0.5 * dtheta)
        else:
            factor = diff1 * kernel_K(kernel_order, dtheta, cfg.angle_eps)
        partials.append(float(np.sum(quot * factor)))
    return math.fsum(partials)


def _initial_grid(cfg, beta, extra=0):
    n = max(cfg.grid, 8 * math.ceil(beta), extra, 8)
    n = min(n, cfg.grid_ceiling // 2)
    n += n % 2
    return max(8, n)


def _doubled(n, ceiling):
    return 2 * n if 2 * n <= ceiling else (ceiling if ceiling > n else None)


def _converge(evaluate, n0, cfg):
    n = n0
    value = evaluate(n)
    last_delta = None
    while True:
        nxt = _doubled(n, cfg.grid_ceiling)
        if nxt is None:
            raise ConvergenceError(
                f"quadrature did not reach tol = {cfg.tol:g} at the grid ceiling {cfg.grid_ceiling}",
                last_delta=last_delta,
            )
        new = evaluate(nxt)
        last_delta = abs(new - value)
        if last_delta < cfg.tol:
            return new, nxt, last_delta
        value, n = new, nxt


def mutual_info_asymptotic(model, thermal, cfg=QuadratureConfig()):
    """Mutual information in the double-scaling limit, in bits.

    The initial grid scales with beta (the symbol develops Fermi-surface
    features of width ~ 1/beta) and doubles until two successive values agree
    to ``cfg.tol``.
    """
    symbol = thermal_symbol(model, thermal)

    def evaluate(n):
        return _pair_sum(symbol, thermal.alpha, n, cfg) / float(n) ** 2

    value, grid, delta = _converge(evaluate, _initial_grid(cfg, thermal.beta), cfg)
    return WidomResult(value, grid, delta)


def mutual_info_kernel_truncated(model, thermal, n_kernel, cfg=QuadratureConfig()):
    """Truncation of the sine-kernel sum at order ``n_kernel``, same quadrature engine.

    Converges to the closed-form value as n_kernel grows, but slowly and
    oscillatorily once beta is large; the grid must also resolve the kernel
    oscillation, hence the n_kernel-dependent starting grid.
    """
    n_kernel = int(n_kernel)
    if n_kernel < 1:
        raise ValidationError("n_kernel must be >= 1")
    symbol = thermal_symbol(model, thermal)

    def evaluate(n):
        return 2.0 * _pair_sum(symbol, thermal.alpha, n, cfg, kernel_order=n_kernel) / float(n) ** 2

    value, _, _ = _converge(evaluate, _initial_grid(cfg, thermal.beta, extra=4 * n_kernel), cfg)
    return value
