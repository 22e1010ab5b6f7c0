import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qlgreen import (Region, classify, double_sphere_average, fd_derivative,
                     fd_radial_laplacian, fundamental_solution,
                     gluing_residuals, mc_double_sphere_average,
                     radial_derivative, radial_laplacian, shell_correction,
                     unit_sphere_area)

# elementary antiderivative value at (n=3, r=0.6, s=0.3, t=0.5), frozen after
# cross-checking against the Monte-Carlo oracle
K3_SHELL_EXAMPLE = 0.12378717796036307


def test_classify_regions_and_boundaries():
    assert classify(0.1, 0.3, 0.5) is Region.INNER
    assert classify(0.8, 0.3, 0.5) is Region.SHELL
    assert classify(0.9, 0.3, 0.5) is Region.OUTER
    assert classify(0.2, 0.3, 0.5) is Region.SHELL  # both boundaries are shell
    assert classify(0.0, 0.25, 0.25) is Region.SHELL


def test_classify_rejects_degenerate_triple():
    with pytest.raises(ValueError):
        classify(0.0, 0.0, 0.0)
    with pytest.raises(ValueError):
        double_sphere_average(3, 0.0, 0.0, 0.0)
    with pytest.raises(ValueError):
        double_sphere_average(3, -0.1, 0.3, 0.3)


def test_outer_region_is_point_value():
    assert double_sphere_average(3, 0.9, 0.3, 0.5) == pytest.approx(
        1.0 / (3.6 * np.pi), rel=1e-14)


def test_inner_region_is_constant_at_larger_radius():
    val = double_sphere_average(4, 0.05, 0.3, 0.5)
    assert val == pytest.approx(fundamental_solution(4, 0.5), rel=1e-14)
    # constant in r throughout the region
    assert double_sphere_average(4, 0.15, 0.3, 0.5) == pytest.approx(val, rel=1e-14)


def test_shell_value_elementary_3d():
    r, s, t = 0.6, 0.3, 0.5
    want = ((1 / (16 * np.pi * t * s))
            * ((t + s - r) + (t - s) ** 2 * (1 / (t + s) - 1 / r))
            + fundamental_solution(3, t + s))
    got = double_sphere_average(3, r, s, t)
    assert got == pytest.approx(want, rel=1e-14)
    assert got == pytest.approx(K3_SHELL_EXAMPLE, abs=1e-15)


def test_one_dimensional_average_is_exact_four_point_sum():
    r, s, t = 0.5, 0.3, 0.5
    want = -sum(abs(r + es * s + et * t)
                for es in (-1, 1) for et in (-1, 1)) / 8.0
    assert double_sphere_average(1, r, s, t) == want


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=1, max_value=6),
       st.floats(min_value=0.01, max_value=1.5),
       st.floats(min_value=0.01, max_value=0.8),
       st.floats(min_value=0.01, max_value=0.8))
def test_symmetry_in_averaging_radii(n, r, s, t):
    assert double_sphere_average(n, r, s, t) == double_sphere_average(n, r, t, s)


def test_monotone_nonincreasing_in_radius():
    rng = np.random.default_rng(10)
    for _ in range(20):
        n = int(rng.integers(1, 7))
        s, t = rng.uniform(0.05, 0.7, 2)
        grid = np.linspace(0.0, s + t + 0.5, 200)
        vals = [double_sphere_average(n, float(r), s, t) for r in grid]
        assert np.all(np.diff(vals) <= 1e-12)
        # strictly decreasing past the inner region
        shell_on = grid > abs(t - s) + 1e-9
        assert np.all(np.diff(np.array(vals)[shell_on]) < 0.0)


def test_positive_for_n_at_least_3():
    rng = np.random.default_rng(11)
    for n in (3, 4, 5, 6):
        for _ in range(20):
            r, s, t = rng.uniform(0.01, 1.2, 3)
            assert double_sphere_average(n, r, s, t) > 0.0


def test_derivative_closed_form_values():
    assert radial_derivative(3, 0.1, 0.3, 0.5) == 0.0
    assert radial_derivative(3, 1.0, 0.3, 0.5) == pytest.approx(-1 / (4 * np.pi), rel=1e-14)
    # at the outer shell boundary the shell factor reaches one (continuity)
    s, t = 0.3, 0.5
    at_edge = radial_derivative(4, t + s, s, t)
    outer = -(t + s) ** (1 - 4) / unit_sphere_area(4)
    assert at_edge == pytest.approx(outer, rel=1e-12)


def test_derivative_rejects_one_dimension():
    # jump discontinuities at the region boundaries for n = 1
    with pytest.raises(ValueError):
        radial_derivative(1, 0.5, 0.3, 0.5)


def test_derivative_matches_finite_differences():
    rng = np.random.default_rng(12)
    for n in (2, 3, 4, 5, 6):
        for _ in range(4):
            s, t = rng.uniform(0.1, 0.6, 2)
            r = rng.uniform(abs(t - s) + 0.05, t + s - 0.05)
            fd = fd_derivative(
                lambda x: double_sphere_average(n, x, s, t, 1e-12), r, 1e-5, order=4)
            assert radial_derivative(n, r, s, t) == pytest.approx(fd, abs=1e-5)


def test_laplacian_closed_form_3d_and_outer_zero():
    r, s, t = 0.6, 0.3, 0.5
    assert radial_laplacian(3, r, s, t) == pytest.approx(
        1 / (8 * np.pi * t * s * r), rel=1e-14)
    assert radial_laplacian(5, 2.0, 0.3, 0.5) == 0.0
    assert radial_laplacian(5, 0.05, 0.3, 0.5) == 0.0


def test_laplacian_boundary_rejection_low_dimensions():
    for n in (2, 3):
        with pytest.raises(ValueError):
            radial_laplacian(n, 0.8, 0.3, 0.5)
    # continuous for n >= 4: boundary value is simply zero
    assert radial_laplacian(4, 0.8, 0.3, 0.5) == 0.0
    with pytest.raises(ValueError):
        radial_laplacian(1, 0.5, 0.3, 0.5)


def test_laplacian_matches_finite_differences():
    rng = np.random.default_rng(13)
    for n in (4, 5, 6):
        for _ in range(3):
            s, t = rng.uniform(0.15, 0.6, 2)
            r = rng.uniform(abs(t - s) + 0.08, t + s - 0.08)
            closed = radial_laplacian(n, r, s, t)
            fd = fd_radial_laplacian(
                lambda x: double_sphere_average(n, x, s, t, 1e-12), n, r, 1e-3, order=4)
            assert fd == pytest.approx(closed, rel=1e-4)


def test_laplacian_total_mass_is_one():
    from qlgreen.sphere_kernel import _laplacian_over_r
    from qlgreen import adaptive_quad
    for n in (2, 4, 6):
        s, t = 0.22, 0.41
        sn = unit_sphere_area(n)
        f = lambda r: sn * r ** (n - 1) * _laplacian_over_r(n, r, s, t)
        tol = 8e-8 if n == 2 else 1e-9
        est = adaptive_quad(f, abs(t - s), t + s, tol, max_panels=8000)
        assert est.value == pytest.approx(1.0, abs=1e-7)


def test_continuity_across_region_boundaries():
    # left/right limits at both region boundaries agree with the boundary
    # value; the probe step is small enough that the derivative term cannot
    # mask a jump at the 1e-9 level
    rng = np.random.default_rng(14)
    for n in range(1, 7):
        for _ in range(3):
            s, t = rng.uniform(0.2, 0.6, 2)
            for edge in (abs(t - s), t + s):
                if edge == 0.0:
                    continue
                below = double_sphere_average(n, edge - 1e-12, s, t, 1e-12)
                at = double_sphere_average(n, edge, s, t, 1e-12)
                above = double_sphere_average(n, edge + 1e-12, s, t, 1e-12)
                assert abs(below - at) < 1e-9
                assert abs(above - at) < 1e-9


def test_gluing_residuals_examples():
    for n, s, t, bound in ((3, 0.3, 0.5, 1e-9), (2, 0.25, 0.25, 1e-8), (6, 0.1, 0.45, 1e-9)):
        inner, outer = gluing_residuals(n, s, t)
        assert abs(inner) < bound
        assert abs(outer) < bound


def test_closed_form_matches_monte_carlo():
    rng = np.random.default_rng(15)
    for n in range(1, 7):
        for i in range(5):
            r, s, t = rng.uniform(0.05, 1.1, 3)
            est = mc_double_sphere_average(n, r, s, t, 10 ** 5, seed=100 + i, stream=n)
            closed = double_sphere_average(n, r, s, t)
            assert abs(closed - est.value) <= 3.0 * est.error, (n, r, s, t)


def test_shell_correction_degenerate_radius():
    # one averaging sphere of radius zero: the shell collapses to a point
    assert shell_correction(3, 0.4, 0.0, 0.4) == 0.0
    assert double_sphere_average(3, 0.4, 0.0, 0.4) == pytest.approx(
        fundamental_solution(3, 0.4), rel=1e-14)
