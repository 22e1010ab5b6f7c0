"""The twice-averaged (regularized) Green's function and its functionals.

Every quantity here is an integral of the closed-form double-sphere average
against a RadialKernel: the function itself, two equivalent expressions for
its maximum (the value at zero), the radial derivative, the Laplacian (an
autocorrelation of the kernel), and the compactly supported deformation
profile.  Tolerances are absolute and propagated through the nested
quadratures.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import sphere_kernel
from .greens import fundamental_solution
from .kernels import RadialKernel, normalize  # noqa: F401  (normalize re-exported)
from .oracles import adaptive_quad
from .specfun import incomplete_beta_symmetric, unit_sphere_area

__all__ = [
    "AveragedGreen",
    "normalize",
    "averaged_green",
    "origin_value_direct",
    "origin_value_flux",
    "averaged_green_derivative",
    "laplacian_at_zero",
    "laplacian_profile",
    "deformed_profile",
]


@dataclass(frozen=True)
class AveragedGreen:
    r: float
    value: float
    error_bound: float


def _check_normalized(kernel: RadialKernel, tol=1e-8):
    sn = unit_sphere_area(kernel.n)
    total = sn * kernel.partial_integral(0.5)
    if abs(total - 1.0) > tol:
        raise ValueError(
            f"kernel {kernel.name!r} is not normalized (mass {total!r}); "
            "call normalize() first")


def _require_origin_admissible(kernel: RadialKernel):
    # the flux form needs nu > 0 for n >= 2 (nu >= 0 suffices for n = 1);
    # a gap kernel can always be re-parametrized to an admissible nu, so the
    # gap licenses everything
    if kernel.eps_gap is not None:
        return
    if kernel.n == 1:
        if kernel.nu < 0.0:
            raise ValueError("value at zero requires nu >= 0 for n = 1")
    elif kernel.n == 2:
        if kernel.nu <= 0.0:
            raise ValueError("value at zero requires nu > 0 for n = 2")
    else:
        if kernel.nu < 0.0:
            raise ValueError("value at zero requires nu >= 0 for n >= 3")


def _require_flux_admissible(kernel: RadialKernel):
    if kernel.eps_gap is not None:
        return
    if kernel.n == 1:
        if kernel.nu < 0.0:
            raise ValueError("the flux form requires nu >= 0 for n = 1")
    elif kernel.nu <= 0.0:
        raise ValueError("the flux form requires nu > 0 (or a gap kernel)")


def _require_derivative_admissible(kernel: RadialKernel):
    if kernel.eps_gap is not None:
        return
    if kernel.n == 1:
        if kernel.nu < 0.0:
            raise ValueError("derivative requires nu >= 0 for n = 1")
    elif kernel.nu < 0.5:
        raise ValueError("derivative requires nu >= 1/2 for n >= 2 "
                         "(or a gap kernel)")


def averaged_green(kernel: RadialKernel, r, tol=1e-8) -> AveragedGreen:
    """G_{n,omega}(r) by nested adaptive quadrature of the double average.

    For r >= 1 both averaging supports sit entirely in the outer region, so
    the value equals G_n(r) exactly and no quadrature is run.
    """
    _check_normalized(kernel)
    r = float(r)
    if r < 0.0:
        raise ValueError("r must be nonnegative")
    n = kernel.n
    if r >= 1.0:
        return AveragedGreen(r, fundamental_solution(n, r), 0.0)
    sn = unit_sphere_area(n)
    inner_tol = tol / (4.0 * sn)
    outer_tol = tol / 2.0
    k_tol = min(1e-11, tol * 1e-3)

    def inner(s):
        f = lambda tv: (kernel.radial_weight(tv)
                        * sphere_kernel._average_over_t(n, r, s, tv, k_tol))
        pts = (s - r, s + r, r - s, s, *kernel.breaks)
        return adaptive_quad(f, 0.0, 0.5, inner_tol, points=pts).value

    def outer(svec):
        return np.array([sn * sn * kernel.radial_weight(sv) * inner(float(sv))
                         for sv in np.atleast_1d(svec)])

    est = adaptive_quad(outer, 0.0, 0.5, outer_tol,
                        points=(r, 0.5 - r, *kernel.breaks))
    return AveragedGreen(r, est.value, est.error + sn * inner_tol)


def origin_value_direct(kernel: RadialKernel, tol=1e-9) -> float:
    """G_{n,omega}(0) as 2 S^2 int s^{n-1} G_n(s) omega(s) P(s) ds.

    Uses the constancy of the double average in the inner region: at the
    origin only the larger averaging radius matters.
    """
    _check_normalized(kernel)
    _require_origin_admissible(kernel)
    n = kernel.n
    sn = unit_sphere_area(n)
    lo = kernel.eps_gap if kernel.eps_gap else 0.0

    def f(s):
        s = np.atleast_1d(np.asarray(s, dtype=float))
        p = np.asarray(kernel.partial_integral(s), dtype=float)
        return (2.0 * sn * sn * kernel.radial_weight(s)
                * fundamental_solution(n, np.maximum(s, 1e-300)) * p)

    return adaptive_quad(f, lo, 0.5, tol, points=kernel.breaks).value


def origin_value_flux(kernel: RadialKernel, tol=1e-9) -> float:
    """G_{n,omega}(0) as G_n(1/2) + S int s^{1-n} P(s)^2 ds.

    The s -> 0 end carries the weight s^{1-n} against P(s)^2; the integral is
    cut at a radius where the analytic tail bound
    P(s) <= s^{(n + [n==1])/2 - 1 + nu} ||w||_L1 puts the remainder below
    tol/10 (gap kernels need no cut).
    """
    _check_normalized(kernel)
    _require_flux_admissible(kernel)
    n = kernel.n
    sn = unit_sphere_area(n)
    delta = 1.0 if n == 1 else 0.0
    if kernel.eps_gap is not None:
        cut = kernel.eps_gap
        tail = 0.0
    else:
        wl1 = kernel.w_l1_norm()
        expo = 2.0 * kernel.nu + delta
        # S * int_0^cut s^{expo - 1} ||w||^2 ds = S ||w||^2 cut^expo / expo
        target = tol / 10.0
        cut = min(1e-3, (target * expo / (sn * max(wl1, 1e-300) ** 2)) ** (1.0 / expo))
        tail = sn * wl1 ** 2 * cut ** expo / expo

    def f(s):
        s = np.atleast_1d(np.asarray(s, dtype=float))
        p = np.asarray(kernel.partial_integral(s), dtype=float)
        return sn * s ** (1.0 - n) * p * p

    # the discarded remainder is positive but below tol/10; it is dropped
    est = adaptive_quad(f, cut, 0.5, tol - tail if tail < tol else tol,
                        points=kernel.breaks)
    return fundamental_solution(n, 0.5) + est.value


def averaged_green_derivative(kernel: RadialKernel, r, tol=1e-8) -> float:
    """d/dr G_{n,omega}(r) by differentiating under the double integral.

    Exactly zero at r = 0 (the integrand vanishes pointwise almost
    everywhere) and -r^{1-n}/S_{n-1} for r >= 1.
    """
    _check_normalized(kernel)
    _require_derivative_admissible(kernel)
    r = float(r)
    if r < 0.0:
        raise ValueError("r must be nonnegative")
    n = kernel.n
    sn = unit_sphere_area(n)
    if r > 1.0:
        return -(r ** (1.0 - n)) / sn
    if r == 0.0:
        return 0.0

    def dk_over_t(s, tv):
        tv = np.asarray(tv, dtype=float)
        out = np.zeros_like(tv)
        d = np.abs(tv - s)
        outer = tv + s < r
        shell = ~(d > r) & ~outer
        if n == 1:
            out[outer] = -0.5
            out[shell] = -0.25
            return out
        scale = -(r ** (1.0 - n)) / sn
        out[outer] = scale
        if np.any(shell):
            tsh = tv[shell]
            x = np.clip((r * r - (tsh - s) ** 2) / (4.0 * tsh * s), 0.0, 1.0)
            h = (2.0 ** (n - 2) * unit_sphere_area(n - 1) / sn
                 * incomplete_beta_symmetric(n, x))
            out[shell] = scale * h
        return out

    inner_tol = tol / (4.0 * sn)

    def inner(s):
        f = lambda tv: kernel.radial_weight(tv) * dk_over_t(s, tv)
        pts = (s - r, s + r, r - s, *kernel.breaks)
        return adaptive_quad(f, 0.0, 0.5, inner_tol, points=pts).value

    def outer(svec):
        return np.array([sn * sn * kernel.radial_weight(sv) * inner(float(sv))
                         for sv in np.atleast_1d(svec)])

    return adaptive_quad(outer, 0.0, 0.5, tol / 2.0,
                         points=(r, 0.5 - r, *kernel.breaks)).value


def laplacian_at_zero(kernel: RadialKernel, tol=1e-10) -> float:
    """A_n G_{n,omega} at the origin: the squared L2 norm of the density,
    S_{n-1} int_0^{1/2} t^{n-1} omega(t)^2 dt.

    Rejects kernels whose density is not square integrable.
    """
    _check_normalized(kernel)
    _require_derivative_admissible(kernel)
    n = kernel.n
    sn = unit_sphere_area(n)
    lo = kernel.eps_gap if kernel.eps_gap else 0.0
    f = lambda t: np.asarray(kernel.omega(t), dtype=float) ** 2 * np.asarray(t, float) ** (n - 1)
    try:
        est = adaptive_quad(f, lo, 0.5, tol, points=kernel.breaks)
    except Exception as exc:
        raise ValueError(
            f"kernel {kernel.name!r} does not appear square integrable") from exc
    return sn * est.value


def laplacian_profile(kernel: RadialKernel, r, tol=1e-8) -> float:
    """A_n G_{n,omega}(r) as the kernel autocorrelation
    int omega(|x - y|) omega(|y|) d^n y at |x| = r.

    Reduced to a radial x polar-angle double quadrature (a plain radial
    integral for n = 1).  Vanishes identically for r >= 1 because the two
    supports are disjoint there.
    """
    _check_normalized(kernel)
    _require_derivative_admissible(kernel)
    r = float(r)
    if r < 0.0:
        raise ValueError("r must be nonnegative")
    n = kernel.n
    if r >= 1.0:
        return 0.0
    lo = kernel.eps_gap if kernel.eps_gap else 0.0
    edge_radii = [0.5, *kernel.breaks]
    if kernel.eps_gap:
        edge_radii.append(kernel.eps_gap)
    if n == 1:
        def f(t):
            t = np.asarray(t, dtype=float)
            return kernel.omega(t) * (kernel.omega(np.abs(r - t)) + kernel.omega(r + t))
        pts = [c - r for c in edge_radii] + [c + r for c in edge_radii] + [r - c for c in edge_radii]
        return adaptive_quad(f, lo, 0.5, tol, points=pts).value

    ring = unit_sphere_area(n - 1)
    inner_tol = tol / (4.0 * max(ring, 1.0))

    def angular(t):
        def f(phi):
            phi = np.asarray(phi, dtype=float)
            dist = np.sqrt((r - t) ** 2 + 4.0 * r * t * np.sin(phi / 2.0) ** 2)
            return np.sin(phi) ** (n - 2) * kernel.omega(dist)
        # angles where the distance crosses a support edge are kinks
        pts = []
        if r > 0.0 and t > 0.0:
            for c in edge_radii:
                q = (c * c - (r - t) ** 2) / (4.0 * r * t)
                if 0.0 < q < 1.0:
                    pts.append(2.0 * np.arcsin(np.sqrt(q)))
        # near the lower distance edge the density may be large; certify
        # relative to that local peak (the t-integral re-weights it away)
        peak = float(np.max(np.abs(kernel.omega(np.array([max(abs(r - t), 1e-9), t])))))
        return adaptive_quad(f, 0.0, np.pi, inner_tol * max(1.0, peak),
                             points=pts).value

    def outer(tvec):
        return np.array([ring * kernel.radial_weight(tv) * angular(float(tv))
                         for tv in np.atleast_1d(tvec)])

    pts_t = [abs(r - c) for c in edge_radii] + [c - r for c in edge_radii] + [r]
    est = adaptive_quad(outer, lo, 0.5, tol / 2.0, points=pts_t)
    return est.value


def deformed_profile(kernel: RadialKernel, r, tol=1e-8) -> float:
    """Compactly supported profile f with
    G_{n,omega}(r) = f(r) + (G_n(1) for r <= 1, else G_n(r)).

    Continuous, vanishes at r = 1 and beyond.
    """
    r = float(r)
    base = fundamental_solution(kernel.n, 1.0) if r <= 1.0 else fundamental_solution(kernel.n, r)
    return averaged_green(kernel, r, tol).value - base
