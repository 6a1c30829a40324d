"""Parameter-scan drivers behind the command-line frontend.

Rows are computed (optionally in a process pool) and always emitted in input
order; per-row numerical failures are recorded in the row's ``error`` field so
a scan never dies half way.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .covariance import finite_coeffs, toeplitz_block
from .errors import FermimiError, ValidationError
from .exact import RingGeometry, finite_size_error_scan, mutual_information_exact
from .entropy import purity_bounds
from .models import ModelSpec, ThermalParams, thermal_symbol
from .torus import TorusSpec, mutual_info_torus
from .widom import QuadratureConfig, mutual_info_asymptotic, mutual_info_kernel_truncated

__all__ = [
    "ScanRow",
    "scan_temperature",
    "scan_size",
    "scan_kernel",
    "scan_torus",
]


@dataclass
class ScanRow:
    variable: str
    value: float
    mi_asymptotic: float | None = None
    mi_exact: float | None = None
    lower_bound: float | None = None
    upper_bound: float | None = None
    est_error: float | None = None
    wall_time_ms: float | None = None
    error: str = ""
    extras: dict = field(default_factory=dict)


def _sanitize(message):
    # the CSV error column must stay comma- and dot-free
    return str(message).replace(",", ";").replace(".", "")


def _temperature_point(args):
    model, alpha, beta, ring_size, q, cfg = args
    row = ScanRow("beta", beta)
    started = time.perf_counter()
    try:
        thermal = ThermalParams(beta, alpha)
        asym = mutual_info_asymptotic(model, thermal, cfg)
        row.mi_asymptotic, row.est_error = asym.value, asym.est_error
        if ring_size is not None:
            geometry = RingGeometry(ring_size, q)
            row.mi_exact = mutual_information_exact(model, thermal, geometry).mi
            full = toeplitz_block(finite_coeffs(thermal_symbol(model, thermal), ring_size), ring_size)
            row.lower_bound, row.upper_bound = purity_bounds(full, geometry.block_length)
    except FermimiError as exc:
        row.error = _sanitize(exc)
    row.wall_time_ms = 1000.0 * (time.perf_counter() - started)
    return row


def scan_temperature(model, alpha, betas, ring_size=None, q=0.5,
                     cfg=QuadratureConfig(), jobs=1):
    """One row per beta: asymptotic value always, exact value and purity bounds
    when a ring size is given."""
    work = [(model, alpha, float(b), ring_size, q, cfg) for b in betas]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_temperature_point, work))
    return [_temperature_point(w) for w in work]


def scan_size(model, thermal, q, sizes, cfg=QuadratureConfig(), coeff_tol=1e-13):
    """Finite-size error e_A plus the exact-vs-asymptotic gap for each ring size."""
    asym = mutual_info_asymptotic(model, thermal, cfg)
    decay = finite_size_error_scan(model, thermal, q, sizes, coeff_tol=coeff_tol)
    rows = []
    for ring_size, e_a in decay.rows:
        row = ScanRow("N", ring_size, mi_asymptotic=asym.value, est_error=asym.est_error)
        started = time.perf_counter()
        try:
            row.mi_exact = mutual_information_exact(model, thermal, RingGeometry(ring_size, q)).mi
            row.extras = {"e_A": e_a, "gap": abs(row.mi_exact - asym.value)}
        except FermimiError as exc:
            row.error = _sanitize(exc)
        row.wall_time_ms = 1000.0 * (time.perf_counter() - started)
        rows.append(row)
    return rows, decay


def scan_kernel(model, thermal, kernel_orders, cfg=QuadratureConfig()):
    """Truncated-kernel value and its distance to the closed-form value per order."""
    closed = mutual_info_asymptotic(model, thermal, cfg).value
    rows = []
    for order in kernel_orders:
        row = ScanRow("n_kernel", int(order))
        started = time.perf_counter()
        try:
            value = mutual_info_kernel_truncated(model, thermal, int(order), cfg)
            row.mi_asymptotic = value
            row.extras = {"delta_vs_closed_form": abs(value - closed), "closed_form": closed}
        except FermimiError as exc:
            row.error = _sanitize(exc)
        row.wall_time_ms = 1000.0 * (time.perf_counter() - started)
        rows.append(row)
    return rows


def scan_torus(dim, extents, onsite, hop, transverse_hop, thermal, cfg=QuadratureConfig()):
    """Total slab mutual information for each transverse extent M."""
    rows = []
    for extent in extents:
        row = ScanRow("M", int(extent))
        started = time.perf_counter()
        try:
            spec = TorusSpec.tight_binding(dim, int(extent), onsite, hop, transverse_hop)
            result = mutual_info_torus(spec, thermal, cfg)
            row.mi_asymptotic = result.total
            row.extras = {"per_mode": result.per_mode}
        except FermimiError as exc:
            row.error = _sanitize(exc)
        row.wall_time_ms = 1000.0 * (time.perf_counter() - started)
        rows.append(row)
    return rows


def beta_grid(lo, hi, points, scale="geometric"):
    lo, hi = float(lo), float(hi)
    points = int(points)
    if not (0 < lo <= hi):
        raise ValidationError("beta grid needs 0 < min <= max")
    if points < 1:
        raise ValidationError("beta grid needs at least one point")
    if points == 1:
        return [lo]
    if scale == "geometric":
        return list(np.geomspace(lo, hi, points))
    if scale == "linear":
        return list(np.linspace(lo, hi, points))
    raise ValidationError(f"unknown beta scale {scale!r}")
