"""Fourier coefficients of the thermal symbol and the Toeplitz covariance blocks.

Two coefficient sources exist.  On a finite ring of N sites the coefficients
are the discrete Fourier transform of the symbol sampled at the N ring
momenta, and block indices are reduced mod N.  In the bulk limit they are the
continuous Fourier coefficients, computed by the periodic rectangle rule with
grid doubling; the rule converges exponentially because the symbol is
analytic on a strip around the real axis.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .entropy import symmetric_eigenvalues
from .errors import ConvergenceError, NumericalError, ValidationError
from .models import ThermalParams, thermal_symbol

__all__ = [
    "ToeplitzCoeffs",
    "finite_coeffs",
    "infinite_coeffs",
    "infinite_coeffs_cached",
    "toeplitz_block",
    "symmetric_eigenvalues",
]

_IMAG_TOL = 1e-10


@dataclass(frozen=True)
class ToeplitzCoeffs:
    """One-sided coefficients x_0 .. x_{k_max}; x_{-k} = x_k by evenness.

    ``ring_size`` is None for bulk-limit coefficients.  For a finite ring the
    stored array covers one full period (k_max = N - 1) and lookups wrap.
    """

    values: np.ndarray
    ring_size: int | None = None

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=float).copy()
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)
        if self.ring_size is not None and len(arr) != self.ring_size:
            raise ValidationError("finite-ring coefficients must cover one full period")

    @property
    def k_max(self):
        return len(self.values) - 1

    def value(self, k):
        if self.ring_size is not None:
            return float(self.values[int(k) % self.ring_size])
        k = abs(int(k))
        if k > self.k_max:
            raise ValidationError(f"coefficient index {k} exceeds k_max = {self.k_max}")
        return float(self.values[k])


def _spectrum_samples(symbol, n):
    return symbol.eval(2.0 * np.pi * np.arange(n) / n)


def _dft_coeffs(samples):
    c = np.fft.fft(samples) / len(samples)
    worst = float(np.max(np.abs(c.imag)))
    if worst > _IMAG_TOL:
        raise NumericalError(f"imaginary residue {worst:.3e} in Fourier coefficients of an even symbol")
    return c.real


def finite_coeffs(symbol, n_sites):
    """Ring coefficients x_k = (1/N) sum_j lambda(2 pi j / N) e^{-2 pi i j k / N}."""
    n_sites = int(n_sites)
    if n_sites <= 0 or n_sites % 2:
        raise ValidationError("N must be even")
    x = _dft_coeffs(_spectrum_samples(symbol, n_sites))
    # enforce x_{N-k} == x_k exactly so mod-N blocks come out exactly symmetric
    tail = 0.5 * (x[1:] + x[1:][::-1])
    x[1:] = tail
    return ToeplitzCoeffs(x, ring_size=n_sites)


def _initial_grid(symbol, k_max):
    n = max(64, 2 * (k_max + 1), 8 * math.ceil(symbol.thermal.beta))
    return 1 << (n - 1).bit_length()


def infinite_coeffs(symbol, k_max, tol=1e-12, max_points=2**20):
    """Bulk-limit coefficients x_k for |k| <= k_max, grid-doubled to tolerance ``tol``.

    Doubling reuses previous samples implicitly via the FFT grid; it aborts
    with :class:`ConvergenceError` once the next grid would exceed ``max_points``.
    """
    k_max = int(k_max)
    if k_max < 0:
        raise ValidationError("k_max must be >= 0")
    if not tol > 0:
        raise ValidationError("tol must be positive")
    n = min(_initial_grid(symbol, k_max), max_points)
    if n < 2 * (k_max + 1):
        raise ValidationError(f"max_points = {max_points} cannot resolve k_max = {k_max}")
    prev = None
    while True:
        x = _dft_coeffs(_spectrum_samples(symbol, n))[: k_max + 1]
        if prev is not None:
            delta = float(np.max(np.abs(x - prev)))
            if delta < tol:
                return ToeplitzCoeffs(x, ring_size=None)
        if 2 * n > max_points:
            raise ConvergenceError(
                f"coefficient quadrature did not reach tol = {tol:g} within {max_points} points",
                last_delta=None if prev is None else delta,
            )
        prev, n = x, 2 * n


@functools.lru_cache(maxsize=64)
def _cached_infinite(model, beta, k_max, tol, max_points):
    return infinite_coeffs(thermal_symbol(model, ThermalParams(beta)), k_max, tol, max_points)


def infinite_coeffs_cached(symbol, k_max, tol=1e-12, max_points=2**20):
    """Memoised variant keyed on (model, beta); alpha plays no role in the coefficients."""
    return _cached_infinite(symbol.model, symbol.thermal.beta, int(k_max), float(tol), int(max_points))


def toeplitz_block(coeffs, block_size):
    """Dense symmetric block M[i, j] = x_{i-j} (bulk) or x_{(i-j) mod N} (ring)."""
    block_size = int(block_size)
    if block_size < 1:
        raise ValidationError("block size must be >= 1")
    idx = np.arange(block_size)
    diff = idx[:, None] - idx[None, :]
    if coeffs.ring_size is not None:
        if block_size > coeffs.ring_size:
            raise ValidationError(f"block size {block_size} exceeds ring size {coeffs.ring_size}")
        return coeffs.values[diff % coeffs.ring_size]
    if block_size > coeffs.k_max + 1:
        raise ValidationError(f"block size {block_size} needs k_max >= {block_size - 1}")
    return coeffs.values[np.abs(diff)]
