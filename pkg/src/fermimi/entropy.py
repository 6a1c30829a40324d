"""Entropy functionals on covariance spectra and purity-based mutual-information bounds.

Everything is expressed in bits (base-2 logarithms).  A fermionic Gaussian
state with real symmetric covariance block X has Renyi-alpha entropy
``tr s_alpha(X)`` where ``s_alpha`` acts on the eigenvalues; alpha = 1 selects
the von Neumann entropy.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import xlogy

from .errors import NumericalError, ValidationError

__all__ = [
    "s_alpha",
    "s_alpha_deriv",
    "s_alpha_deriv2",
    "entropy_of_block",
    "purity_bounds",
    "symmetric_eigenvalues",
]

_LN2 = math.log(2.0)
# eigensolver round-off tolerated when clamping spectra onto [-1, 1]
_CLAMP_SLACK = 1e-12
_SPECTRUM_SLACK = 1e-8


def _validate_alpha(alpha):
    alpha = float(alpha)
    if not (math.isfinite(alpha) and alpha >= 0):
        raise ValidationError("alpha must be >= 0")
    return alpha


def _clamp_unit(x, slack):
    x_arr = np.asarray(x, dtype=float)
    if np.any(np.abs(x_arr) > 1.0 + slack):
        worst = float(np.max(np.abs(x_arr)))
        raise ValidationError(f"argument outside [-1, 1] beyond slack {slack:g}: |x| = {worst!r}")
    return np.clip(x_arr, -1.0, 1.0)


def s_alpha(x, alpha=1.0):
    """Entropy of one fermionic mode with covariance eigenvalue ``x``.

    Even in x, equal to 1 at x = 0 (maximally mixed) and 0 at x = +-1 (pure).
    Values within 1e-12 of the interval are clamped; anything further out is
    rejected as a genuine error rather than round-off.
    """
    alpha = _validate_alpha(alpha)
    x_arr = np.asarray(x, dtype=float)
    scalar = x_arr.ndim == 0
    xc = _clamp_unit(x_arr, _CLAMP_SLACK)
    p = 0.5 * (1.0 + xc)
    q = 0.5 * (1.0 - xc)
    if alpha == 1.0:
        out = -(xlogy(p, p) + xlogy(q, q)) / _LN2
    elif alpha == 0.0:
        out = np.where(np.abs(xc) < 1.0, 1.0, 0.0)
    else:
        # factor out max(p, q) so large alpha cannot underflow both powers
        big = np.maximum(p, q)
        ratio = np.minimum(p, q) / big
        out = (alpha * np.log2(big) + np.log1p(ratio**alpha) / _LN2) / (1.0 - alpha)
    return float(out) if scalar else out


def s_alpha_deriv(x, alpha=1.0):
    """First derivative of s_alpha; defined on the open interval |x| < 1."""
    alpha = _validate_alpha(alpha)
    x_arr = np.asarray(x, dtype=float)
    scalar = x_arr.ndim == 0
    if np.any(np.abs(x_arr) >= 1.0):
        raise ValidationError("s_alpha_deriv requires |x| < 1")
    if alpha == 1.0:
        out = 0.5 * np.log2((1.0 - x_arr) / (1.0 + x_arr))
    elif alpha == 0.0:
        out = np.zeros_like(x_arr)
    else:
        num = (1.0 + x_arr) ** (alpha - 1.0) - (1.0 - x_arr) ** (alpha - 1.0)
        den = (1.0 + x_arr) ** alpha + (1.0 - x_arr) ** alpha
        out = alpha / ((1.0 - alpha) * _LN2) * num / den
    return float(out) if scalar else out


def s_alpha_deriv2(x, alpha=1.0):
    """Second derivative of s_alpha on |x| < 1 (strictly negative: concavity)."""
    alpha = _validate_alpha(alpha)
    x_arr = np.asarray(x, dtype=float)
    scalar = x_arr.ndim == 0
    if np.any(np.abs(x_arr) >= 1.0):
        raise ValidationError("s_alpha_deriv2 requires |x| < 1")
    if alpha == 1.0:
        out = -1.0 / (_LN2 * (1.0 - x_arr * x_arr))
    elif alpha == 0.0:
        out = np.zeros_like(x_arr)
    else:
        pa = (1.0 + x_arr) ** alpha
        qa = (1.0 - x_arr) ** alpha
        den = pa + qa
        first = ((1.0 + x_arr) ** (alpha - 2.0) + (1.0 - x_arr) ** (alpha - 2.0)) / den
        ratio = ((1.0 + x_arr) ** (alpha - 1.0) - (1.0 - x_arr) ** (alpha - 1.0)) / den
        out = -(alpha / _LN2) * (first + alpha / (1.0 - alpha) * ratio**2)
    return float(out) if scalar else out


def symmetric_eigenvalues(matrix):
    """Ascending eigenvalues of an exactly symmetric real matrix."""
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {m.shape}")
    if not np.array_equal(m, m.T):
        raise ValidationError("matrix is not exactly symmetric")
    try:
        return np.linalg.eigvalsh(m)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"symmetric eigensolver did not converge: {exc}") from exc


def entropy_of_block(matrix, alpha=1.0):
    """tr s_alpha of a covariance sub-block, via its eigenvalues.

    The spectrum must lie in [-1 - 1e-8, 1 + 1e-8]; anything further out means
    the matrix is not a covariance block.
    """
    mu = symmetric_eigenvalues(matrix)
    if np.any(np.abs(mu) > 1.0 + _SPECTRUM_SLACK):
        worst = float(np.max(np.abs(mu)))
        raise ValidationError(f"spectrum outside [-1, 1] beyond slack {_SPECTRUM_SLACK:g}: {worst!r}")
    return float(np.sum(s_alpha(np.clip(mu, -1.0, 1.0), alpha)))


def _trace_sqrt_bound(mu):
    return float(np.sum(np.sqrt(np.clip(1.0 - mu * mu, 0.0, None))) / _LN2)


def purity_bounds(x_full, split_at):
    """Purity sandwich for the von Neumann mutual information of a bipartition.

    With P the pinching of X to its leading ``split_at`` x ``split_at`` block and
    the complementary block, the mutual information tr s(P) - tr s(X) is
    bounded below by the quadratic functional l(x) = (1 - x^2)/2 and above by
    u(x) = sqrt(1 - x^2)/log 2.  The lower bound reduces to the squared
    Frobenius norm of the off-diagonal block, so it needs no eigensolve; the
    upper bound takes one eigensolve per block.  Returns ``(lower, upper)``.
    """
    x = np.asarray(x_full, dtype=float)
    n = x.shape[0] if x.ndim == 2 else 0
    if x.ndim != 2 or x.shape[0] != x.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {x.shape}")
    if not (0 < split_at < n):
        raise ValidationError(f"split must satisfy 0 < L < {n}, got {split_at}")
    block_a = x[:split_at, :split_at]
    block_b = x[split_at:, split_at:]
    lower = float(np.sum(x[:split_at, split_at:] ** 2))
    mu_full = _clamp_unit(symmetric_eigenvalues(x), _SPECTRUM_SLACK)
    mu_a = _clamp_unit(symmetric_eigenvalues(block_a), _SPECTRUM_SLACK)
    mu_b = _clamp_unit(symmetric_eigenvalues(block_b), _SPECTRUM_SLACK)
    upper = _trace_sqrt_bound(mu_a) + _trace_sqrt_bound(mu_b) - _trace_sqrt_bound(mu_full)
    return lower, upper
