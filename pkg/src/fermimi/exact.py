"""Exact mutual information of a bisected thermal ring, and two independent checks.

The full-system entropy never needs an eigensolve: the covariance matrix is
circulant, so its spectrum is the symbol sampled at the ring momenta.  The
block entropies use dense eigensolves of the mod-N Toeplitz sub-blocks.

Two validation tools live here as well: a brute-force Fock-space oracle for
rings of up to 8 sites, and the finite-size error scan comparing ring
coefficients against bulk-limit coefficients at identical block sizes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import xlogy

from .covariance import finite_coeffs, infinite_coeffs_cached, toeplitz_block
from .entropy import entropy_of_block, s_alpha
from .errors import ValidationError
from .fits import fit_exponential_rate
from .models import ModelSpec, ThermalParams, hamiltonian_matrix, thermal_symbol

__all__ = [
    "RingGeometry",
    "MIResult",
    "mutual_information_exact",
    "fock_space_crosscheck",
    "finite_size_error_scan",
    "FiniteSizeScan",
]

DEFAULT_RING_CAP = 4096
_FOCK_CAP = 8


@dataclass(frozen=True)
class RingGeometry:
    """Even ring of N sites bisected into A = {0..L-1} with L = ceil(q N)."""

    ring_size: int
    block_fraction: float

    def __post_init__(self):
        n = int(self.ring_size)
        object.__setattr__(self, "ring_size", n)
        object.__setattr__(self, "block_fraction", float(self.block_fraction))
        if n <= 0 or n % 2:
            raise ValidationError("N must be even")
        if not (0.0 < self.block_fraction < 1.0):
            raise ValidationError("q must lie strictly between 0 and 1")
        if not (0 < self.block_length < n):
            raise ValidationError(f"block length {self.block_length} must satisfy 0 < L < N")

    @classmethod
    def from_block_length(cls, ring_size, block_length):
        geom = cls(ring_size, block_length / ring_size)
        if geom.block_length != block_length:
            raise ValidationError(f"q = {block_length}/{ring_size} does not round back to L = {block_length}")
        return geom

    @property
    def block_length(self):
        return math.ceil(self.block_fraction * self.ring_size)


@dataclass(frozen=True)
class MIResult:
    """Entropies of A, B and the full ring, and the assembled mutual information."""

    s_a: float
    s_b: float
    s_total: float
    mi: float
    geometry: RingGeometry
    thermal: ThermalParams
    model: ModelSpec


def mutual_information_exact(model, thermal, geometry, size_cap=DEFAULT_RING_CAP):
    """Exact finite-N mutual information S_A + S_B - S_total of the bisected ring."""
    if geometry.ring_size > size_cap:
        raise ValidationError(f"N = {geometry.ring_size} exceeds the size cap {size_cap}")
    symbol = thermal_symbol(model, thermal)
    alpha = thermal.alpha
    coeffs = finite_coeffs(symbol, geometry.ring_size)
    length = geometry.block_length
    s_a = entropy_of_block(toeplitz_block(coeffs, length), alpha)
    s_b = entropy_of_block(toeplitz_block(coeffs, geometry.ring_size - length), alpha)
    momenta = 2.0 * np.pi * np.arange(geometry.ring_size) / geometry.ring_size
    s_total = float(np.sum(s_alpha(symbol.eval(momenta), alpha)))
    return MIResult(s_a, s_b, s_total, s_a + s_b - s_total, geometry, thermal, model)


# ---------------------------------------------------------------------------
# Fock-space oracle
# ---------------------------------------------------------------------------

def _site_annihilators(n_sites):
    """Jordan-Wigner site operators f_i on the 2^N occupation basis."""
    lower = np.array([[0.0, 1.0], [0.0, 0.0]])
    phase = np.diag([1.0, -1.0])
    eye2 = np.eye(2)
    ops = []
    for i in range(n_sites):
        op = np.ones((1, 1))
        for j in range(n_sites):
            op = np.kron(op, lower if j == i else (phase if j < i else eye2))
        ops.append(op)
    return ops


def _partial_trace(rho, keep_left, dim_left, dim_right):
    t = rho.reshape(dim_left, dim_right, dim_left, dim_right)
    return np.einsum("ajbj->ab", t) if keep_left else np.einsum("iaib->ab", t)


def _entropy_from_probs(probs, alpha):
    probs = np.clip(np.asarray(probs, dtype=float), 0.0, None)
    if alpha == 1.0:
        return float(-np.sum(xlogy(probs, probs)) / math.log(2.0))
    return float(np.log2(np.sum(probs**alpha)) / (1.0 - alpha))


def _reduced_entropy(rho, alpha):
    return _entropy_from_probs(np.linalg.eigvalsh(rho), alpha)


def fock_space_crosscheck(model, thermal, n_sites, block_length):
    """Mutual information computed twice: brute force on the 2^N Fock space and
    via the Gaussian covariance route.  Returns ``(mi_fock, mi_gaussian)``.

    The Gibbs state is assembled as a product of single-mode occupation
    operators over the eigenmodes of the Hamiltonian matrix, which is exact
    and avoids a matrix exponential.
    """
    n_sites = int(n_sites)
    block_length = int(block_length)
    if n_sites > _FOCK_CAP:
        raise ValidationError(f"Fock-space check limited to N <= {_FOCK_CAP}")
    if n_sites < 2 or n_sites % 2:
        raise ValidationError("N must be even")
    if not (0 < block_length < n_sites):
        raise ValidationError("block length must satisfy 0 < L < N")
    energies, modes = np.linalg.eigh(hamiltonian_matrix(model, n_sites))
    site_ops = _site_annihilators(n_sites)
    dim = 2**n_sites
    occupations = 1.0 / (1.0 + np.exp(thermal.beta * energies))
    rho = np.eye(dim)
    for m in range(n_sites):
        mode_op = sum(modes[i, m] * site_ops[i] for i in range(n_sites))
        number_op = mode_op.T @ mode_op
        rho = rho @ ((1.0 - occupations[m]) * np.eye(dim) + (2.0 * occupations[m] - 1.0) * number_op)
    dim_left = 2**block_length
    dim_right = 2 ** (n_sites - block_length)
    rho_a = _partial_trace(rho, True, dim_left, dim_right)
    rho_b = _partial_trace(rho, False, dim_left, dim_right)
    alpha = thermal.alpha
    # the Gibbs construction fixes the global spectrum exactly: one product of
    # occupation factors per filling pattern.  An eigensolve of rho would lose
    # the sub-eps eigenvalues, which alpha < 1 entropies are sensitive to.
    patterns = (np.arange(dim)[:, None] >> np.arange(n_sites)[None, :]) & 1
    global_probs = np.prod(np.where(patterns == 1, occupations, 1.0 - occupations), axis=1)
    mi_fock = (
        _reduced_entropy(rho_a, alpha)
        + _reduced_entropy(rho_b, alpha)
        - _entropy_from_probs(global_probs, alpha)
    )
    geometry = RingGeometry.from_block_length(n_sites, block_length)
    mi_gaussian = mutual_information_exact(model, thermal, geometry).mi
    return mi_fock, mi_gaussian


# ---------------------------------------------------------------------------
# Finite-size error decay
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FiniteSizeScan:
    """Decay table of the finite-ring entropy error and its fitted rate."""

    rows: tuple  # of (N, e_A)
    rate: float | None
    r_squared: float | None
    fit_points: int = field(default=0)


def finite_size_error_scan(model, thermal, q, sizes, coeff_tol=1e-13,
                           noise_floor=10.0 * np.finfo(float).eps):
    """e_A(N) = |tr s_alpha(ring block) - tr s_alpha(bulk block)| at matched block size.

    Fits log e_A against N by least squares over the entries above
    ``noise_floor``; the fitted ``rate`` (positive for decay) and its r^2 are
    None when fewer than two points survive the floor.
    """
    sizes = [int(n) for n in sizes]
    if not sizes:
        raise ValidationError("at least one ring size is required")
    symbol = thermal_symbol(model, thermal)
    alpha = thermal.alpha
    lengths = {n: RingGeometry(n, q).block_length for n in sizes}
    bulk = infinite_coeffs_cached(symbol, max(lengths.values()) - 1, tol=coeff_tol)
    rows = []
    for n in sizes:
        length = lengths[n]
        ring_trace = entropy_of_block(toeplitz_block(finite_coeffs(symbol, n), length), alpha)
        bulk_block = toeplitz_block(bulk, length)
        bulk_trace = entropy_of_block(bulk_block, alpha)
        rows.append((n, abs(ring_trace - bulk_trace)))
    xs = np.array([r[0] for r in rows], dtype=float)
    ys = np.array([r[1] for r in rows], dtype=float)
    keep = ys > noise_floor
    if int(np.sum(keep)) >= 2:
        report = fit_exponential_rate(xs[keep], ys[keep])
        return FiniteSizeScan(tuple(rows), report.coefficient, report.r_squared, int(np.sum(keep)))
    return FiniteSizeScan(tuple(rows), None, None, int(np.sum(keep)))
