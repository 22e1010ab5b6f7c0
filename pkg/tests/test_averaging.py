import numpy as np
import pytest

from qlgreen import (averaged_green, averaged_green_derivative, ball_kernel,
                     deformed_profile, fundamental_solution, gap_kernel,
                     kernel_from_callable, laplacian_at_zero, laplacian_profile,
                     mc_averaged_green, mc_kernel_autocorrelation,
                     origin_value_direct, origin_value_flux, power_kernel,
                     shell_correction, unit_sphere_area)
from qlgreen.case_studies import (exp_family_origin_laplacian,
                                  exp_family_origin_value, exp_kernel,
                                  exp_normalization, sphere_limit_kernel)
from tests.conftest import make_random_kernel

# hand-integrated value for the gap kernel with w = 1 on (1/4, 1/2),
# n = 3, nu = 1/2 (omega = scale/t): G3(1/2) + 5/(54 pi) = 16/(27 pi)
GAP_QUARTER_VALUE = 16.0 / (27.0 * np.pi)


def test_outside_unit_ball_equals_free_solution():
    kern = ball_kernel(3)
    est = averaged_green(kern, 2.0)
    assert est.value == fundamental_solution(3, 2.0)
    assert est.value == pytest.approx(1 / (8 * np.pi), rel=1e-15)
    assert est.error_bound == 0.0


def test_ball_kernel_origin_value_closed_form():
    # for the constant density in n = 3 the flux form integrates to 3/(5 pi)
    kern = ball_kernel(3)
    want = 3.0 / (5.0 * np.pi)
    assert origin_value_direct(kern) == pytest.approx(want, abs=1e-10)
    assert origin_value_flux(kern) == pytest.approx(want, abs=1e-10)
    assert averaged_green(kern, 0.0, tol=1e-9).value == pytest.approx(want, abs=1e-8)


def test_origin_value_forms_agree_for_random_kernels(kernel_factory):
    rng = np.random.default_rng(31)
    for n in (1, 3, 4, 5):
        for _ in range(3):
            kern = kernel_factory(n, rng)
            v1 = origin_value_direct(kern)
            v2 = origin_value_flux(kern)
            assert abs(v1 - v2) <= 1e-7 * (1.0 + abs(v1))
            # the direct form is the r = 0 limit of the full average
            assert averaged_green(kern, 0.0, tol=1e-8).value == pytest.approx(v1, abs=1e-7)


def test_averaged_green_matches_monte_carlo():
    rng = np.random.default_rng(32)
    kernels = [power_kernel(3, 0.5, 2.0), make_random_kernel(1, rng),
               make_random_kernel(4, rng)]
    radii = np.linspace(0.0, 1.4, 8)
    for kern in kernels:
        for i, r in enumerate(radii):
            est = mc_averaged_green(kern, float(r), 10 ** 5, seed=300 + i)
            val = averaged_green(kern, float(r), tol=1e-6).value
            assert abs(val - est.value) <= 3.0 * est.error, (kern.name, r)


def test_monotone_and_positive_profiles(kernel_factory):
    rng = np.random.default_rng(33)
    for n in (1, 3):
        kern = kernel_factory(n, rng)
        grid = np.linspace(1e-3, 2.0, 200)
        vals = [averaged_green(kern, float(r), tol=1e-9).value for r in grid]
        assert np.all(np.diff(vals) < 1e-9)
        if n >= 3:
            assert min(vals) > 0.0


def test_derivative_endpoints_and_interior():
    kern = power_kernel(3, 0.5, 1.0)
    assert averaged_green_derivative(kern, 0.0) == 0.0
    assert averaged_green_derivative(kern, 1.5) == pytest.approx(-1 / (9 * np.pi), rel=1e-13)
    # interior value against a central difference of the full average
    r, h = 0.4, 1e-4
    fd = (averaged_green(kern, r + h, tol=1e-11).value
          - averaged_green(kern, r - h, tol=1e-11).value) / (2 * h)
    assert averaged_green_derivative(kern, r, tol=1e-9) == pytest.approx(fd, abs=1e-5)


def test_derivative_quadrature_reproduces_boundary_value():
    # at r = 1 every kernel pair lies in the outer region, so the quadrature
    # must reproduce -1/S_{n-1} without shortcuts
    for n in (2, 4):
        kern = power_kernel(n, 0.75, 1.5)
        want = -1.0 / unit_sphere_area(n)
        assert averaged_green_derivative(kern, 1.0, tol=1e-9) == pytest.approx(want, abs=1e-7)


def test_laplacian_at_zero_is_density_l2_norm():
    a = 1.7
    kern = exp_kernel(a)
    assert laplacian_at_zero(kern) == pytest.approx(exp_family_origin_laplacian(a), abs=1e-10)
    rho = exp_normalization(a)
    # squared L2 norm over the half ball, radially reduced
    direct = 4 * np.pi * (rho / (2 * np.pi)) ** 2 * (np.expm1(2 * a * 0.5)) / (2 * a)
    assert laplacian_at_zero(kern) == pytest.approx(direct, rel=1e-12)


def test_laplacian_profile_matches_value_at_zero_and_vanishes_outside():
    rng = np.random.default_rng(34)
    for n in (1, 2, 3):
        kern = make_random_kernel(n, rng, nu=0.9)
        assert laplacian_profile(kern, 0.0, tol=1e-9) == pytest.approx(
            laplacian_at_zero(kern), abs=1e-7)
        assert laplacian_profile(kern, 1.0) == 0.0
        assert laplacian_profile(kern, 1.3) == 0.0


def test_laplacian_profile_matches_exp_family_shell_density():
    # trusted interior form for the exponential family on 1/2 <= r <= 1
    a, r = 1.3, 0.6
    rho = exp_normalization(a)
    closed = (2 * rho ** 2 / (a ** 2 * r)) * (
        np.exp(a) - np.exp(a * r) - a * (1 - r) * np.exp(a * r)) / (4 * np.pi)
    got = laplacian_profile(exp_kernel(a), r, tol=1e-9)
    assert got == pytest.approx(closed, abs=1e-7)


def test_laplacian_profile_matches_autocorrelation_oracle():
    kern = power_kernel(2, 0.8, 1.0)
    est = mc_kernel_autocorrelation(kern, 0.35, 2 * 10 ** 5, seed=45)
    val = laplacian_profile(kern, 0.35, tol=1e-8)
    assert abs(val - est.value) <= 3.0 * est.error


def test_gap_kernel_origin_value_hand_integrated():
    kern = gap_kernel(3, 0.5, 0.25)
    assert origin_value_flux(kern) == pytest.approx(GAP_QUARTER_VALUE, abs=1e-10)
    assert origin_value_direct(kern) == pytest.approx(GAP_QUARTER_VALUE, abs=1e-9)


def test_gap_kernel_sandwich_bounds():
    rng = np.random.default_rng(35)
    for _ in range(5):
        n = int(rng.integers(2, 6))
        eps = float(rng.uniform(0.05, 0.4))
        nu = float(rng.uniform(-1.0, 1.0))  # any exponent works with a gap
        kern = gap_kernel(n, nu, eps)
        val = origin_value_flux(kern)
        assert fundamental_solution(n, 0.5) <= val + 1e-12
        assert val <= fundamental_solution(n, eps) + 1e-12


def test_deformed_profile_support_and_sphere_limit():
    kern = sphere_limit_kernel(3, 60)
    assert deformed_profile(kern, 1.0) == 0.0
    assert deformed_profile(kern, 1.7) == 0.0
    # pointwise convergence of the profile to the equal-half-radii correction
    for r in (0.2, 0.6):
        target = shell_correction(3, r, 0.5, 0.5)
        errs = [abs(deformed_profile(sphere_limit_kernel(3, k), r, tol=1e-9) - target)
                for k in (20, 80, 320)]
        assert errs[0] > errs[1] > errs[2]
        assert errs[2] < 5e-3


def test_admissibility_rejections():
    flat = lambda t: np.ones_like(np.asarray(t, dtype=float))
    with pytest.raises(ValueError):
        origin_value_flux(kernel_from_callable(2, -0.2, flat))
    with pytest.raises(ValueError):
        averaged_green_derivative(kernel_from_callable(3, 0.2, flat), 0.5)
    with pytest.raises(ValueError):
        # w in L1 but the squared density is not integrable
        laplacian_at_zero(power_kernel(3, 0.5, -0.75))
    # an unnormalized kernel is rejected everywhere
    raw = kernel_from_callable(3, 0.5, flat, auto_normalize=False).with_scale(2.0)
    with pytest.raises(ValueError):
        origin_value_direct(raw)
