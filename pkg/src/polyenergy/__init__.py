"""Energy minimization for polynomial potentials of the inner product on circles and spheres."""

__version__ = "0.1.0"

from .basis import (
    ChebyshevSeries,
    ConvergenceError,
    DomainError,
    GegenbauerSeries,
    MonomialPolynomial,
    PFramePotential,
    cheb_eval,
    cheb_to_monomial,
    critical_points,
    expand_gegenbauer,
    gegenbauer_eval,
    gegenbauer_to_monomial,
    monomial_to_cheb,
    pframe_coeffs,
    series_from_dict,
    series_product,
    to_chebyshev,
)
from .measures import (
    CircleMeasure,
    SphereConfig,
    canonicalize,
    circle_energy,
    circle_energy_fn,
    circle_gradient,
    gram,
    measure_from_dict,
    sphere_energy,
    sphere_gradient,
)
from .moments import MomentVector, OrderMismatchError, is_psd, moment_energy, moments_of, toeplitz
from .optimize import OptimizationResult, OptimizerConfig, minimize_circle, minimize_sphere, project_simplex, refine
from .structured import best_ngon, conjecture_check, ngon_energy, two_point_optimum
from .experiments import SweepRecord, alpha_sweep, build_alpha_potential, compare_minimizers, p_sweep

__all__ = [
    "__version__",
    "ChebyshevSeries",
    "ConvergenceError",
    "DomainError",
    "GegenbauerSeries",
    "MonomialPolynomial",
    "PFramePotential",
    "cheb_eval",
    "cheb_to_monomial",
    "critical_points",
    "expand_gegenbauer",
    "gegenbauer_eval",
    "gegenbauer_to_monomial",
    "monomial_to_cheb",
    "pframe_coeffs",
    "series_from_dict",
    "series_product",
    "to_chebyshev",
    "CircleMeasure",
    "SphereConfig",
    "canonicalize",
    "circle_energy",
    "circle_energy_fn",
    "circle_gradient",
    "gram",
    "measure_from_dict",
    "sphere_energy",
    "sphere_gradient",
    "MomentVector",
    "OrderMismatchError",
    "is_psd",
    "moment_energy",
    "moments_of",
    "toeplitz",
    "OptimizationResult",
    "OptimizerConfig",
    "minimize_circle",
    "minimize_sphere",
    "project_simplex",
    "refine",
    "best_ngon",
    "conjecture_check",
    "ngon_energy",
    "two_point_optimum",
    "SweepRecord",
    "alpha_sweep",
    "build_alpha_potential",
    "compare_minimizers",
    "p_sweep",
]
