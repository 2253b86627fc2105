"""Macdonald functions of imaginary order and their continuum-normalization
orthogonality, verified numerically at finite precision and finite cutoff."""

from .bessel_im import (
    FunctionValue,
    besseli_imag,
    besselk_dx,
    besselk_imag,
    besselk_largex_approx,
    besselk_smallx_approx,
    combination_imag_residue,
    ode_residual,
    smallx_error_envelope,
)
from .errors import (
    ConvergenceError,
    DomainError,
    MacdonaldError,
    NearDiagonalError,
    RangeError,
)
from .gamma_core import (
    GammaEval,
    abs_gamma_imag,
    arg_gamma_imag,
    log_gamma,
    reciprocal_gamma,
)
from .ortho_verify import (
    KernelValue,
    PairSpec,
    QuadratureSpec,
    TestFunctionSpec,
    WeakLimitReport,
    asymptotic_envelope,
    delta_model,
    diagonal_limit,
    kernel_asymptotic,
    kernel_boundary,
    kernel_quadrature,
    kl_weight,
    phase_function,
    weak_limit_test,
)

__version__ = "0.1.0"

__all__ = [
    "FunctionValue",
    "GammaEval",
    "KernelValue",
    "PairSpec",
    "QuadratureSpec",
    "TestFunctionSpec",
    "WeakLimitReport",
    "MacdonaldError",
    "DomainError",
    "RangeError",
    "NearDiagonalError",
    "ConvergenceError",
    "log_gamma",
    "reciprocal_gamma",
    "abs_gamma_imag",
    "arg_gamma_imag",
    "besseli_imag",
    "besselk_imag",
    "besselk_dx",
    "besselk_smallx_approx",
    "besselk_largex_approx",
    "combination_imag_residue",
    "ode_residual",
    "smallx_error_envelope",
    "kernel_boundary",
    "kernel_quadrature",
    "kernel_asymptotic",
    "kl_weight",
    "phase_function",
    "delta_model",
    "diagonal_limit",
    "weak_limit_test",
    "asymptotic_envelope",
    "__version__",
]
