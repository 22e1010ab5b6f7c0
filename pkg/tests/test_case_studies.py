import numpy as np
import pytest
from scipy.special import jn_zeros

from qlgreen import (averaged_green, double_sphere_average, fundamental_solution,
                     origin_value_flux, unit_sphere_area)
from qlgreen.case_studies import (bessel_cutoff_kernel, bessel_cutoff_normalization,
                                  exp_family_green, exp_family_green_derivative,
                                  exp_family_laplacian_minimizer,
                                  exp_family_origin_laplacian,
                                  exp_family_origin_value, exp_kernel,
                                  exp_normalization, exp_normalization_denominator,
                                  exp_profile_table, kernel_fourier_profile,
                                  phi_psi_table, renorm_functional,
                                  sphere_limit_green, sphere_limit_kernel,
                                  sphere_limit_origin_value, sphere_limit_table,
                                  theta_table)

# frozen after cross-checking against an independent adaptive integrator
THETA_1_AT_20 = -3.20807455


# ---------------------------------------------------------------------------
# sphere-limit family
# ---------------------------------------------------------------------------

def test_sphere_limit_kernel_is_normalized_band():
    kern = sphere_limit_kernel(3, 10)
    assert kern.eps_gap == pytest.approx(0.4)
    assert unit_sphere_area(3) * kern.partial_integral(0.5) == pytest.approx(1.0, abs=1e-12)
    assert kern.omega(0.39) == 0.0
    assert kern.omega(0.45) > 0.0


def test_sphere_limit_origin_value_closed_form_and_flux_agree():
    for n, k in ((3, 10), (2, 25), (5, 40)):
        closed = sphere_limit_origin_value(n, k)
        flux = origin_value_flux(sphere_limit_kernel(n, k))
        assert closed == pytest.approx(flux, abs=1e-10)
        assert closed >= fundamental_solution(n, 0.5)
    assert sphere_limit_origin_value(3, 10) == pytest.approx(0.17097346248949383, abs=1e-14)


def test_sphere_limit_green_matches_double_sphere_average():
    for n in (2, 3, 4, 5, 6):
        for r in (0.0, 0.3, 0.75, 1.0, 1.4):
            want = double_sphere_average(n, r, 0.5, 0.5, 1e-12)
            assert sphere_limit_green(n, r) == pytest.approx(want, abs=1e-9)


def test_sphere_limit_green_examples():
    assert sphere_limit_green(3, 0.0) == pytest.approx(1 / (2 * np.pi), rel=1e-13)
    assert sphere_limit_green(3, 1.0) == pytest.approx(fundamental_solution(3, 1.0), rel=1e-13)
    rs = np.linspace(0.0, 1.0, 11)
    assert np.allclose([sphere_limit_green(3, r) for r in rs],
                       (2.0 - rs) / (4 * np.pi), rtol=1e-13)
    with pytest.raises(ValueError):
        sphere_limit_green(1, 0.5)


def test_sphere_limit_value_converges_from_above():
    vals = [sphere_limit_origin_value(3, k) for k in (10, 100, 1000)]
    limit = fundamental_solution(3, 0.5)
    assert vals[0] > vals[1] > vals[2] > limit


# ---------------------------------------------------------------------------
# 3D exponential family
# ---------------------------------------------------------------------------

def test_exp_normalization_positive_and_smooth_near_zero():
    alphas = [-200.0, -5.0, -1e-3, 1e-3, 1.0, 3.72, 100.0]
    for a in alphas:
        assert exp_normalization(a) > 0.0
    # the normalization denominator behaves like alpha^2/4 near zero
    a = 1e-3
    assert exp_normalization_denominator(a) == pytest.approx(a * a / 4, rel=1e-2)
    # hence the normalization constant itself tends to 4 (the half-ball value)
    assert exp_normalization(1e-3) == pytest.approx(4.0, rel=1e-3)
    with pytest.raises(ValueError):
        exp_normalization(1e-5)
    with pytest.raises(ValueError):
        exp_kernel(0.0)


def test_exp_kernel_mass_and_flux_value():
    for a in (-5.0, 1.0, 10.0):
        kern = exp_kernel(a)
        assert unit_sphere_area(3) * kern.partial_integral(0.5) == pytest.approx(1.0, abs=1e-13)
        assert origin_value_flux(kern) == pytest.approx(exp_family_origin_value(a), abs=1e-9)


def test_exp_family_green_outer_branch_and_quadrature_gate():
    assert exp_family_green(2.0, 1.3) == pytest.approx(1 / (4 * np.pi * 1.3), rel=1e-14)
    for a in (-5.0, 1.0, 3.72):
        for r in (0.05, 0.45, 0.8):
            quad = averaged_green(exp_kernel(a), r, tol=1e-8).value
            assert exp_family_green(a, r) == pytest.approx(quad, abs=1e-6)


def test_exp_family_green_is_continuous_with_derivative():
    for a in (-5.0, 1.0, 3.72, 10.0):
        for edge in (0.5, 1.0):
            v_lo = exp_family_green(a, edge - 1e-11)
            v_hi = exp_family_green(a, edge + 1e-11)
            assert abs(v_lo - v_hi) < 1e-9
            d_lo = exp_family_green_derivative(a, edge - 1e-11)
            d_hi = exp_family_green_derivative(a, edge + 1e-11)
            assert abs(d_lo - d_hi) < 1e-8


def test_exp_family_derivative_matches_finite_difference():
    a = 2.5
    for r in (0.2, 0.6, 1.2):
        h = 1e-6
        fd = (exp_family_green(a, r + h) - exp_family_green(a, r - h)) / (2 * h)
        assert exp_family_green_derivative(a, r) == pytest.approx(fd, abs=1e-8)


def test_exp_family_origin_series_branch_is_smooth():
    # the r -> 0 series branch must join the direct formula seamlessly
    a = 3.0
    left = exp_family_green(a, 1e-3 * (1 - 1e-9))
    right = exp_family_green(a, 1e-3 * (1 + 1e-9))
    assert left == pytest.approx(right, rel=1e-10)
    assert exp_family_green(a, 0.0) == pytest.approx(exp_family_origin_value(a), rel=1e-12)


def test_phi_limits_and_monotonicity():
    phis = [exp_family_origin_value(a) for a in np.linspace(-10, 20, 50)]
    assert np.all(np.diff(phis) < 0.0)
    assert exp_family_origin_value(100.0) == pytest.approx(1 / (2 * np.pi), rel=1e-2)
    assert exp_family_origin_value(-50.0) > 1.0  # grows without bound


def test_psi_has_unique_interior_minimum_near_3_72():
    ac = exp_family_laplacian_minimizer()
    assert ac == pytest.approx(3.72, abs=0.01)
    before = [exp_family_origin_laplacian(a) for a in np.linspace(ac - 2, ac - 1e-4, 40)]
    after = [exp_family_origin_laplacian(a) for a in np.linspace(ac + 1e-4, ac + 2, 40)]
    assert np.all(np.diff(before) < 0.0)
    assert np.all(np.diff(after) > 0.0)
    assert exp_family_origin_laplacian(-50.0) > 100.0
    assert exp_family_origin_laplacian(50.0) > exp_family_origin_laplacian(ac)


# ---------------------------------------------------------------------------
# 2D Bessel-cutoff family
# ---------------------------------------------------------------------------

def test_bessel_kernel_normalization():
    for a in (4.0, 20.0, 100.0, 320.0):
        assert bessel_cutoff_normalization(a) > 0.0
        kern = bessel_cutoff_kernel(a)
        total = unit_sphere_area(2) * kern.partial_integral(0.5)
        assert total == pytest.approx(1.0, abs=1e-8)


def test_fourier_profile_normalization_and_tail():
    for a in (5.0, 20.0, 80.0, 320.0):
        assert kernel_fourier_profile(a, 0.0) == pytest.approx(1.0, abs=1e-8)
    assert abs(kernel_fourier_profile(100.0, 2.0)) <= 0.05
    # inside the nominal cutoff the profile approaches one as alpha grows
    assert kernel_fourier_profile(400.0, 0.5) == pytest.approx(1.0, abs=0.1)


def test_fourier_profile_reproducible_across_tolerances():
    coarse = kernel_fourier_profile(20.0, 0.5, tol=1e-7)
    fine = kernel_fourier_profile(20.0, 0.5, tol=1e-12)
    assert coarse == pytest.approx(fine, abs=1e-7)


def test_renorm_functional_parts_sum_and_stability():
    total, parts = renorm_functional(1, 20.0, tol=1e-4)
    assert total == pytest.approx(sum(parts), rel=1e-12)
    refined, _ = renorm_functional(1, 20.0, tol=1e-5)
    assert total == pytest.approx(refined, abs=1e-4)
    assert total == pytest.approx(THETA_1_AT_20, abs=1e-4)
    with pytest.raises(ValueError):
        renorm_functional(0, 20.0)


def test_renorm_functional_decays_along_unit_normalization_radii():
    """At radii where the normalization factor is exactly one the functional
    decays cleanly toward the sharp-cutoff value zero; its envelope elsewhere
    oscillates with the normalization factor (see the acceptance notes)."""
    zeros = jn_zeros(0, 63)
    alphas = [2.0 * zeros[i] for i in (4, 10, 18, 62)]
    vals = []
    for a in alphas:
        assert bessel_cutoff_normalization(a) == pytest.approx(1.0, abs=1e-12)
        total, parts = renorm_functional(1, a, tol=1e-5)
        vals.append(abs(total))
    assert vals[0] > vals[1] > vals[2] > vals[3]
    slope = np.polyfit(np.log(alphas), np.log(vals), 1)[0]
    assert slope <= -0.4


# ---------------------------------------------------------------------------
# tables
# ---------------------------------------------------------------------------

def test_tables_have_expected_shapes():
    header, rows = phi_psi_table([1.0, 2.0, 3.0])
    assert header == ["alpha", "phi", "psi"]
    assert len(rows) == 3 and len(rows[0]) == 3
    header, rows = exp_profile_table(1.0, [0.1, 0.9, 1.4])
    assert header == ["r", "green_avg"]
    assert rows[2][1] == pytest.approx(1 / (4 * np.pi * 1.4), rel=1e-13)
    header, rows = sphere_limit_table(3, [10, 100])
    assert header[0] == "k" and len(rows) == 2
    assert rows[0][1] == pytest.approx(sphere_limit_origin_value(3, 10), rel=1e-14)
    header, rows = theta_table(1, [20.0], tol=1e-3)
    assert len(rows) == 1 and len(rows[0]) == 5
    assert rows[0][1] == pytest.approx(sum(rows[0][2:]), rel=1e-12)
