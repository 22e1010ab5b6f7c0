"""Quasi-locally averaged fundamental solutions of the Laplace operator.

Closed-form double-sphere averages of the free Green's function in any
dimension, averaged Green's functions for admissible radial kernels, three
worked kernel families, and the brute-force oracles (Monte Carlo, adaptive
quadrature, finite differences) that every closed form is verified against.
"""

from .averaging import (AveragedGreen, averaged_green, averaged_green_derivative,
                        deformed_profile, laplacian_at_zero, laplacian_profile,
                        normalize, origin_value_direct, origin_value_flux)
from .case_studies import (bessel_cutoff_kernel, bessel_cutoff_normalization,
                           exp_family_green, exp_family_laplacian_minimizer,
                           exp_family_origin_laplacian, exp_family_origin_value,
                           exp_kernel, exp_normalization, kernel_fourier_profile,
                           renorm_functional, sphere_limit_green,
                           sphere_limit_kernel, sphere_limit_origin_value)
from .greens import fundamental_solution, fundamental_solution_scaled
from .kernels import (RadialKernel, ball_kernel, gap_kernel, kernel_from_callable,
                      kernel_from_table, power_kernel)
from .oracles import (OracleEstimate, QuadratureError, adaptive_quad,
                      fd_derivative, fd_radial_laplacian, mc_averaged_green,
                      mc_double_sphere_average, mc_kernel_autocorrelation,
                      rng_stream)
from .specfun import (bessel_j, ci, fresnel, incomplete_beta_symmetric, si,
                      si_ci, unit_sphere_area)
from .sphere_kernel import (Region, classify, double_sphere_average,
                            gluing_residuals, radial_derivative,
                            radial_laplacian, shell_correction)

__version__ = "0.1.0"

__all__ = [
    "AveragedGreen", "OracleEstimate", "QuadratureError", "RadialKernel",
    "Region", "adaptive_quad", "averaged_green", "averaged_green_derivative",
    "ball_kernel", "bessel_cutoff_kernel", "bessel_cutoff_normalization",
    "bessel_j", "ci", "classify", "deformed_profile", "double_sphere_average",
    "exp_family_green", "exp_family_laplacian_minimizer",
    "exp_family_origin_laplacian", "exp_family_origin_value", "exp_kernel",
    "exp_normalization", "fd_derivative", "fd_radial_laplacian", "fresnel",
    "fundamental_solution", "fundamental_solution_scaled", "gap_kernel",
    "gluing_residuals", "incomplete_beta_symmetric", "kernel_fourier_profile",
    "kernel_from_callable", "kernel_from_table", "laplacian_at_zero",
    "laplacian_profile", "mc_averaged_green", "mc_double_sphere_average",
    "mc_kernel_autocorrelation", "normalize", "origin_value_direct",
    "origin_value_flux", "power_kernel", "radial_derivative",
    "radial_laplacian", "renorm_functional", "rng_stream", "shell_correction",
    "si", "si_ci", "sphere_limit_green", "sphere_limit_kernel",
    "sphere_limit_origin_value", "unit_sphere_area",
]
