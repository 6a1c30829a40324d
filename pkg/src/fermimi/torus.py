"""Slab geometry in D >= 2: transverse Fourier reduction to modulated chains.

A cubic lattice that is periodic in every direction, cut along one axis, block
diagonalises under the discrete Fourier transform of the D-1 transverse
directions.  Each transverse momentum vector k yields an effective
one-dimensional coupling sequence

    d~^(k)_m = sum_t cos(2 pi t . k / M) d_(t, m),

whose sine counterpart cancels exactly by reflection symmetry.  The total
mutual information is the fixed-order sum of the one-dimensional asymptotic
values over all transverse modes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, NumericalError, ValidationError
from .models import ModelSpec, ThermalParams
from .widom import QuadratureConfig, mutual_info_asymptotic

__all__ = ["TorusSpec", "TorusResult", "transverse_dispersions", "mutual_info_torus"]

_SINE_TOL = 1e-10
DEFAULT_MODE_CAP = 4096


@dataclass(frozen=True)
class TorusSpec:
    """Reflection-symmetric finite-range couplings on a (Z_M)^(D-1) x ring lattice.

    ``couplings`` maps full offset vectors of length ``dim`` (transverse
    components first, longitudinal last) to real amplitudes.
    """

    dim: int
    extent: int
    couplings: dict

    def __post_init__(self):
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "extent", int(self.extent))
        if self.dim < 2:
            raise ValidationError("dim must be >= 2 (use ModelSpec for chains)")
        if self.extent < 1:
            raise ValidationError("extent must be >= 1")
        cleaned = {}
        for offset, amp in dict(self.couplings).items():
            vec = tuple(int(c) for c in offset)
            if len(vec) != self.dim:
                raise ValidationError(f"offset {offset!r} must have {self.dim} components")
            cleaned[vec] = float(amp)
        for vec, amp in cleaned.items():
            mirror = tuple(-c for c in vec)
            if cleaned.get(mirror) != amp:
                raise ValidationError(f"couplings must be reflection symmetric; offset {vec} breaks it")
        object.__setattr__(self, "couplings", cleaned)

    @classmethod
    def tight_binding(cls, dim, extent, onsite, hop, transverse_hop=None):
        """Nearest-neighbour model: ``hop`` along the cut axis, ``transverse_hop``
        (defaulting to ``hop``) along every transverse axis."""
        t_hop = hop if transverse_hop is None else transverse_hop
        zero = (0,) * dim
        couplings = {zero: float(onsite)}
        for sign in (1, -1):
            couplings[zero[:-1] + (sign,)] = float(hop)
        for axis in range(dim - 1):
            for sign in (1, -1):
                vec = [0] * dim
                vec[axis] = sign
                couplings[tuple(vec)] = float(t_hop)
        return cls(dim, extent, couplings)

    @property
    def mode_count(self):
        return self.extent ** (self.dim - 1)


def transverse_dispersions(spec):
    """Effective chain couplings, one per transverse momentum vector.

    Returns a list of ``(mode, ModelSpec)`` in lexicographic mode order.
    """
    if not spec.couplings:
        raise ValidationError("couplings must be non-empty")
    longitudinal_max = max(abs(v[-1]) for v in spec.couplings)
    out = []
    for mode in itertools.product(range(spec.extent), repeat=spec.dim - 1):
        eff = np.zeros(longitudinal_max + 1)
        for offset, amp in spec.couplings.items():
            m = offset[-1]
            if m < 0:
                continue  # d~_{-m} = d~_m; accumulate one side only
            eff[m] += np.cos(_canonical_phase(offset[:-1], mode, spec.extent)) * amp
        sine_residue = _sine_residue(spec, mode, longitudinal_max)
        if sine_residue > _SINE_TOL:
            raise NumericalError(f"sine part {sine_residue:.3e} failed to cancel for mode {mode}")
        out.append((mode, ModelSpec(tuple(eff))))
    return out


def _canonical_phase(transverse_offset, mode, extent):
    """Phase angle 2 pi (t . k mod M)/M reduced to the smaller mirror image.

    Both the residue reduction and the min(m, M - m) folding leave the cosine
    unchanged but make modes k and M - k evaluate bit-identical arguments.
    """
    m = sum(t * k for t, k in zip(transverse_offset, mode)) % extent
    return 2.0 * np.pi * min(m, extent - m) / extent


def _sine_residue(spec, mode, longitudinal_max):
    residues = np.zeros(longitudinal_max + 1)
    for offset, amp in spec.couplings.items():
        m = offset[-1]
        if m < 0:
            continue
        phase = 2.0 * np.pi * sum(t * k for t, k in zip(offset[:-1], mode)) / spec.extent
        residues[m] += np.sin(phase) * amp
    return float(np.max(np.abs(residues)))


@dataclass(frozen=True)
class TorusResult:
    total: float
    per_mode: tuple  # of (mode, WidomResult)


def mutual_info_torus(spec, thermal, cfg=QuadratureConfig(), mode_cap=DEFAULT_MODE_CAP):
    """Mutual information of the bisected slab: fixed-order sum over transverse modes."""
    if not isinstance(thermal, ThermalParams):
        raise ValidationError("thermal must be a ThermalParams")
    if spec.mode_count > mode_cap:
        raise ValidationError(f"{spec.mode_count} transverse modes exceed the cap {mode_cap}")
    per_mode = []
    for mode, chain in transverse_dispersions(spec):
        try:
            per_mode.append((mode, mutual_info_asymptotic(chain, thermal, cfg)))
        except ConvergenceError as exc:
            raise ConvergenceError(f"transverse mode {mode} failed: {exc}", exc.last_delta) from exc
    total = float(sum(res.value for _, res in per_mode))
    return TorusResult(total, tuple(per_mode))
