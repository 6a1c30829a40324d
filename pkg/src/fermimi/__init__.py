"""Mutual information of thermal free-fermion lattice models.

Exact finite-ring computation through covariance-matrix eigensolves, an
asymptotically exact double-integral evaluator for the bulk limit, purity
bounds, slab geometries and temperature-scaling fits.
"""

from .covariance import (
    ToeplitzCoeffs,
    finite_coeffs,
    infinite_coeffs,
    infinite_coeffs_cached,
    symmetric_eigenvalues,
    toeplitz_block,
)
from .entropy import entropy_of_block, purity_bounds, s_alpha, s_alpha_deriv, s_alpha_deriv2
from .errors import ConvergenceError, FermimiError, NumericalError, ValidationError
from .exact import (
    FiniteSizeScan,
    MIResult,
    RingGeometry,
    finite_size_error_scan,
    fock_space_crosscheck,
    mutual_information_exact,
)
from .fits import FitReport, fit_exponential_rate, fit_log_beta_slope, fit_quadratic_coefficient
from .models import (
    ModelSpec,
    SymbolFns,
    ThermalParams,
    dispersion_eval,
    fermi_function,
    hamiltonian_matrix,
    thermal_symbol,
)
from .torus import TorusResult, TorusSpec, mutual_info_torus, transverse_dispersions
from .widom import (
    QuadratureConfig,
    WidomResult,
    kernel_K,
    mi_integrand,
    mutual_info_asymptotic,
    mutual_info_kernel_truncated,
)

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "FermimiError",
    "FiniteSizeScan",
    "FitReport",
    "MIResult",
    "ModelSpec",
    "NumericalError",
    "QuadratureConfig",
    "RingGeometry",
    "SymbolFns",
    "ThermalParams",
    "ToeplitzCoeffs",
    "TorusResult",
    "TorusSpec",
    "ValidationError",
    "WidomResult",
    "dispersion_eval",
    "entropy_of_block",
    "fermi_function",
    "finite_coeffs",
    "finite_size_error_scan",
    "fit_exponential_rate",
    "fit_log_beta_slope",
    "fit_quadratic_coefficient",
    "fock_space_crosscheck",
    "hamiltonian_matrix",
    "infinite_coeffs",
    "infinite_coeffs_cached",
    "kernel_K",
    "mi_integrand",
    "mutual_info_asymptotic",
    "mutual_info_kernel_truncated",
    "mutual_info_torus",
    "mutual_information_exact",
    "purity_bounds",
    "s_alpha",
    "s_alpha_deriv",
    "s_alpha_deriv2",
    "symmetric_eigenvalues",
    "thermal_symbol",
    "toeplitz_block",
    "transverse_dispersions",
]
