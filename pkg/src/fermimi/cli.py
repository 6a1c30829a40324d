"""Command-line frontend: single evaluations, parameter scans, fits and bounds.

Exit codes: 0 success, 1 numerical failure, 2 usage error.  All numeric output
is printed with 12 significant digits; CSV uses ``\n`` line endings and a
mandatory header row.  An optional flat JSON config file supplies defaults for
any long flag (keys mirror the flag names); explicit flags win.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from .errors import NumericalError, ValidationError
from .exact import RingGeometry, fock_space_crosscheck, mutual_information_exact
from .covariance import finite_coeffs, toeplitz_block
from .entropy import purity_bounds
from .fits import fit_exponential_rate, fit_log_beta_slope, fit_quadratic_coefficient
from .models import ModelSpec, ThermalParams, thermal_symbol
from .scans import beta_grid, scan_kernel, scan_size, scan_temperature, scan_torus
from .torus import TorusSpec, mutual_info_torus
from .widom import QuadratureConfig, mutual_info_asymptotic

__all__ = ["main"]


# ---------------------------------------------------------------------------
# formatting
# ---------------------------------------------------------------------------

def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".12g")
    return str(value)


def _json_dumps(obj):
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format(float(obj), ".12g") if math.isfinite(obj) else "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_json_dumps(v) for v in obj) + "]"
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_json_dumps(v)}" for k, v in obj.items()) + "}"
    raise TypeError(f"cannot serialise {type(obj)!r}")


def _csv(header, rows):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(cell) for cell in row))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# option plumbing
# ---------------------------------------------------------------------------

class _Opts:
    """Layered option lookup: explicit flag, then config file, then default."""

    def __init__(self, args, config):
        self._args = args
        self._config = config

    def get(self, flag, default=None, cast=None):
        value = getattr(self._args, flag.replace("-", "_"), None)
        if value is None:
            value = self._config.get(flag)
        if value is None:
            return default
        if cast is not None:
            try:
                return cast(value)
            except (TypeError, ValueError) as exc:
                raise ValidationError(f"--{flag}: cannot interpret {value!r}") from exc
        return value

    def require(self, flag, cast=None):
        value = self.get(flag, None, cast)
        if value is None:
            raise ValidationError(f"--{flag} is required")
        return value


def _float_list(text):
    return [float(part) for part in str(text).split(",") if part != ""]


def _int_list(text):
    return [int(part) for part in str(text).split(",") if part != ""]


def _model(opts):
    couplings = opts.get("couplings")
    if couplings is not None:
        return ModelSpec(tuple(_float_list(couplings)))
    return ModelSpec.xx(opts.get("a", 1.0, float), opts.get("b", 1.0, float))


def _thermal(opts):
    return ThermalParams(opts.require("beta", float), opts.get("alpha", 1.0, float))


def _quadrature(opts):
    return QuadratureConfig(
        grid=opts.get("grid", 64, int),
        tol=opts.get("tol", 1e-8, float),
        lambda_match_eps=opts.get("lambda-match-eps", 1e-8, float),
        angle_eps=opts.get("angle-eps", 1e-6, float),
        grid_ceiling=opts.get("grid-ceiling", 2**13, int),
    )


def _emit(text, opts):
    path = opts.get("output")
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _emit_result(record, opts, default_format="json"):
    fmt = opts.get("format", default_format)
    if fmt == "json":
        _emit(_json_dumps(record) + "\n", opts)
    elif fmt == "csv":
        _emit(_csv(list(record), [list(record.values())]), opts)
    else:
        raise ValidationError(f"unknown format {fmt!r}")


def _rows_to_records(header, rows):
    return [dict(zip(header, row)) for row in rows]


def _emit_table(header, rows, opts):
    fmt = opts.get("format", "csv")
    if fmt == "csv":
        _emit(_csv(header, rows), opts)
    elif fmt == "json":
        _emit(_json_dumps(_rows_to_records(header, rows)) + "\n", opts)
    else:
        raise ValidationError(f"unknown format {fmt!r}")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_exact(opts):
    model = _model(opts)
    thermal = _thermal(opts)
    geometry = RingGeometry(opts.require("N", int), opts.get("q", 0.5, float))
    result = mutual_information_exact(model, thermal, geometry)
    _emit_result({
        "N": geometry.ring_size,
        "L": geometry.block_length,
        "q": geometry.block_fraction,
        "beta": thermal.beta,
        "alpha": thermal.alpha,
        "couplings": list(model.couplings),
        "s_A": result.s_a,
        "s_B": result.s_b,
        "s_total": result.s_total,
        "mi": result.mi,
    }, opts)


def _cmd_asymptotic(opts):
    model = _model(opts)
    thermal = _thermal(opts)
    result = mutual_info_asymptotic(model, thermal, _quadrature(opts))
    _emit_result({
        "beta": thermal.beta,
        "alpha": thermal.alpha,
        "couplings": list(model.couplings),
        "value": result.value,
        "grid_used": result.grid_used,
        "est_error": result.est_error,
    }, opts)


def _cmd_kernel(opts):
    model = _model(opts)
    thermal = _thermal(opts)
    orders = opts.get("n-kernels", [1, 2, 4, 8, 16, 32, 64, 128, 256], _int_list)
    rows = scan_kernel(model, thermal, orders, _quadrature(opts))
    table = [
        [int(r.value), r.mi_asymptotic, r.extras.get("delta_vs_closed_form"), r.error]
        for r in rows
    ]
    _emit_table(["n_kernel", "value", "delta_vs_closed_form", "error"], table, opts)


def _fit_window(opts, betas, kind):
    explicit = opts.get("fit-window", None, _float_list)
    if explicit is not None:
        if len(explicit) != 2:
            raise ValidationError("--fit-window expects 'min,max'")
        return tuple(explicit)
    if kind == "low-critical":
        top = max(betas)
        return (top / 10.0, top)
    return (min(betas), max(betas))


def _run_fit(kind, betas, values, window):
    betas = np.asarray(betas, dtype=float)
    values = np.asarray(values, dtype=float)
    if kind == "high":
        report = fit_quadratic_coefficient(betas, values)
    elif kind == "low-critical":
        report = fit_log_beta_slope(betas, values, window)
    elif kind == "low-gapped":
        keep = values > 0
        report = fit_exponential_rate(betas[keep], values[keep], window)
    else:
        raise ValidationError(f"unknown fit kind {kind!r}")
    return {
        "kind": report.kind,
        "coefficient": report.coefficient,
        "r_squared": report.r_squared,
        "window": list(report.window),
    }


def _cmd_scan_temperature(opts):
    model = _model(opts)
    alpha = opts.get("alpha", 1.0, float)
    betas = beta_grid(
        opts.require("beta-min", float),
        opts.require("beta-max", float),
        opts.get("beta-points", 8, int),
        opts.get("beta-scale", "geometric"),
    )
    ring_size = opts.get("N", None, int)
    fit_kind = opts.get("fit")
    window = _fit_window(opts, betas, fit_kind) if fit_kind else None
    rows = scan_temperature(
        model, alpha, betas,
        ring_size=ring_size,
        q=opts.get("q", 0.5, float),
        cfg=_quadrature(opts),
        jobs=opts.get("jobs", 1, int),
    )
    header = ["beta", "mi_asymptotic", "mi_exact", "lower_bound", "upper_bound",
              "est_error", "wall_time_ms", "error"]
    table = [[r.value, r.mi_asymptotic, r.mi_exact, r.lower_bound, r.upper_bound,
              r.est_error, r.wall_time_ms, r.error] for r in rows]
    _emit_table(header, table, opts)
    if fit_kind:
        good = [(r.value, r.mi_asymptotic) for r in rows if not r.error]
        if len(good) < 2:
            raise NumericalError("too few successful rows to fit")
        fit = _run_fit(fit_kind, [g[0] for g in good], [g[1] for g in good], window)
        sys.stderr.write(_json_dumps({"fit": fit}) + "\n")


def _cmd_scan_size(opts):
    model = _model(opts)
    thermal = _thermal(opts)
    sizes = opts.require("N-list", _int_list)
    rows, _ = scan_size(model, thermal, opts.get("q", 0.5, float), sizes,
                        cfg=_quadrature(opts), coeff_tol=opts.get("coeff-tol", 1e-13, float))
    table = [
        [int(r.value), r.extras.get("e_A"), r.mi_exact, r.mi_asymptotic, r.extras.get("gap")]
        for r in rows
    ]
    _emit_table(["N", "e_A", "mi_exact", "mi_asymptotic", "gap"], table, opts)


def _cmd_torus(opts):
    thermal = _thermal(opts)
    cfg = _quadrature(opts)
    dim = opts.get("dim", 2, int)
    onsite = opts.get("onsite", 0.0, float)
    hop = opts.get("hop", 1.0, float)
    t_hop = opts.get("transverse-hop", None, float)
    extents = opts.get("M-list", None, _int_list)
    if extents is not None:
        rows = scan_torus(dim, extents, onsite, hop, t_hop, thermal, cfg)
        table = [[int(r.value), r.mi_asymptotic, r.error] for r in rows]
        _emit_table(["M", "mi_total", "error"], table, opts)
        return
    extent = opts.require("M", int)
    spec = TorusSpec.tight_binding(dim, extent, onsite, hop, t_hop)
    result = mutual_info_torus(spec, thermal, cfg)
    _emit_result({
        "dim": dim,
        "M": extent,
        "beta": thermal.beta,
        "alpha": thermal.alpha,
        "total": result.total,
        "per_mode": [
            {"mode": list(mode), "value": res.value,
             "grid_used": res.grid_used, "est_error": res.est_error}
            for mode, res in result.per_mode
        ],
    }, opts)


def _cmd_bounds(opts):
    model = _model(opts)
    beta = opts.require("beta", float)
    thermal = ThermalParams(beta, 1.0)  # purity bounds sandwich the von Neumann value
    geometry = RingGeometry(opts.require("N", int), opts.get("q", 0.5, float))
    exact = mutual_information_exact(model, thermal, geometry)
    full = toeplitz_block(finite_coeffs(thermal_symbol(model, thermal), geometry.ring_size),
                          geometry.ring_size)
    lower, upper = purity_bounds(full, geometry.block_length)
    _emit_result({
        "N": geometry.ring_size,
        "L": geometry.block_length,
        "beta": beta,
        "alpha": 1.0,
        "lower": lower,
        "upper": upper,
        "mi_exact": exact.mi,
    }, opts)


def _cmd_crosscheck(opts):
    model = _model(opts)
    thermal = _thermal(opts)
    n_sites = opts.require("N", int)
    block = opts.get("L", max(1, n_sites // 2), int)
    mi_fock, mi_gaussian = fock_space_crosscheck(model, thermal, n_sites, block)
    _emit_result({
        "N": n_sites,
        "L": block,
        "beta": thermal.beta,
        "alpha": thermal.alpha,
        "mi_fock": mi_fock,
        "mi_gaussian": mi_gaussian,
        "difference": abs(mi_fock - mi_gaussian),
    }, opts)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_model_flags(parser):
    parser.add_argument("--a", type=float, help="on-site energy of the nearest-neighbour model")
    parser.add_argument("--b", type=float, help="hopping of the nearest-neighbour model")
    parser.add_argument("--couplings", help="comma-separated v_1,...,v_r (overrides --a/--b)")


def _add_thermal_flags(parser, with_alpha=True):
    parser.add_argument("--beta", type=float, help="inverse temperature (> 0)")
    if with_alpha:
        parser.add_argument("--alpha", type=float, help="Renyi order (1 = von Neumann)")


def _add_quadrature_flags(parser):
    parser.add_argument("--grid", type=int, help="initial quadrature grid per axis (even)")
    parser.add_argument("--tol", type=float, help="grid-doubling convergence target")
    parser.add_argument("--lambda-match-eps", type=float, help=argparse.SUPPRESS)
    parser.add_argument("--angle-eps", type=float, help=argparse.SUPPRESS)
    parser.add_argument("--grid-ceiling", type=int, help="largest allowed grid per axis")


def _add_io_flags(parser):
    parser.add_argument("--output", help="output path (default: standard output)")
    parser.add_argument("--format", choices=["csv", "json"], help="output format")
    parser.add_argument("--config", help="flat JSON file of defaults; flags override")
    parser.add_argument("--jobs", type=int, help="parallel workers for scans")


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="fermimi",
        description="Mutual information of thermal free-fermion chains and slabs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name, handler, help_text):
        p = sub.add_parser(name, help=help_text)
        _add_model_flags(p)
        _add_thermal_flags(p)
        _add_quadrature_flags(p)
        _add_io_flags(p)
        p.set_defaults(handler=handler)
        return p

    p = command("exact", _cmd_exact, "exact finite-ring mutual information")
    p.add_argument("--N", type=int, help="ring size (even)")
    p.add_argument("--q", type=float, help="block fraction in (0, 1)")

    command("asymptotic", _cmd_asymptotic, "asymptotic (double-scaling) mutual information")

    p = command("kernel", _cmd_kernel, "kernel-truncated evaluation against the closed form")
    p.add_argument("--n-kernels", help="comma-separated truncation orders")

    p = command("scan-temperature", _cmd_scan_temperature, "scan over inverse temperature")
    p.add_argument("--beta-min", type=float)
    p.add_argument("--beta-max", type=float)
    p.add_argument("--beta-points", type=int)
    p.add_argument("--beta-scale", choices=["geometric", "linear"])
    p.add_argument("--N", type=int, help="also compute exact value and bounds on this ring")
    p.add_argument("--q", type=float)
    p.add_argument("--fit", choices=["high", "low-critical", "low-gapped"])
    p.add_argument("--fit-window", help="explicit beta window 'min,max' for the fit")

    p = command("scan-size", _cmd_scan_size, "finite-size error and gap per ring size")
    p.add_argument("--N-list", help="comma-separated ring sizes")
    p.add_argument("--q", type=float)
    p.add_argument("--coeff-tol", type=float, help=argparse.SUPPRESS)

    p = command("torus", _cmd_torus, "slab mutual information (sum over transverse modes)")
    p.add_argument("--dim", type=int, help="lattice dimension D >= 2")
    p.add_argument("--M", type=int, help="transverse extent")
    p.add_argument("--M-list", help="comma-separated transverse extents (CSV output)")
    p.add_argument("--onsite", type=float)
    p.add_argument("--hop", type=float)
    p.add_argument("--transverse-hop", type=float)

    p = command("bounds", _cmd_bounds, "purity bounds sandwiching the exact value")
    p.add_argument("--N", type=int)
    p.add_argument("--q", type=float)

    p = command("crosscheck", _cmd_crosscheck, "Fock-space oracle vs Gaussian value (N <= 8)")
    p.add_argument("--N", type=int)
    p.add_argument("--L", type=int)

    return parser


def _load_config(args):
    path = getattr(args, "config", None)
    if not path:
        return {}
    try:
        loaded = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(loaded, dict):
        raise ValidationError("config must be a flat JSON object")
    return loaded


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        opts = _Opts(args, _load_config(args))
        args.handler(opts)
        return 0
    except ValidationError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except (NumericalError, np.linalg.LinAlgError) as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
