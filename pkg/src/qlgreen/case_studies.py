"""Three worked kernel families.

* Sphere-limit family: band densities of width 1/k concentrating on the
  sphere of radius 1/2; their averaged Green's function converges to the
  double average over two radius-1/2 spheres, which minimizes the value at
  zero.
* Three-dimensional exponential family omega_alpha(t) = rho_alpha e^{alpha
  t}/(2 pi t): the averaged Green's function, its value and Laplacian at the
  origin, and the Laplacian's unique minimizer in alpha, all in closed form
  (cross-checked against quadrature by the test suite).
* Two-dimensional Bessel-cutoff family: a coordinate-space truncation of the
  momentum-space sharp cutoff profile J1(alpha s)/s, its Fourier profile, and
  the associated momentum-space renormalization functionals theta_j.
"""

from __future__ import annotations

import numpy as np
from scipy import special as _sp

from .greens import fundamental_solution
from .kernels import RadialKernel
from .oracles import OracleEstimate, QuadratureError, adaptive_quad
from .specfun import incomplete_beta_symmetric, unit_sphere_area

__all__ = [
    "sphere_limit_kernel",
    "sphere_limit_origin_value",
    "sphere_limit_green",
    "exp_normalization_denominator",
    "exp_normalization",
    "exp_kernel",
    "exp_family_green",
    "exp_family_green_derivative",
    "exp_family_origin_value",
    "exp_family_origin_laplacian",
    "exp_family_laplacian_minimizer",
    "bessel_cutoff_normalization",
    "bessel_cutoff_kernel",
    "kernel_fourier_profile",
    "renorm_functional",
    "phi_psi_table",
    "exp_profile_table",
    "theta_table",
    "sphere_limit_table",
]


# ---------------------------------------------------------------------------
# sphere-limit family
# ---------------------------------------------------------------------------

def sphere_limit_kernel(n, k) -> RadialKernel:
    """Band density r^{1-n} k / S_{n-1} on [1/2 - 1/k, 1/2]; normalized."""
    n, k = int(n), int(k)
    if k < 3:
        raise ValueError("sphere_limit_kernel requires k >= 3")
    sn = unit_sphere_area(n)
    a = 0.5 - 1.0 / k
    delta = 1.0 if n == 1 else 0.0
    nu = 0.5
    expo = (n - delta) / 2.0 - nu + 1.0 - n  # w(t) = t^expo * k/S on the band

    def w(t):
        t = np.asarray(t, dtype=float)
        return np.where((t >= a) & (t <= 0.5), k / sn * t ** expo, 0.0)

    def partial(s):
        s = np.asarray(s, dtype=float)
        return k / sn * np.clip(s - a, 0.0, 1.0 / k)

    return RadialKernel(n=n, nu=nu, w=w, eps_gap=a, partial=partial,
                        name=f"sphere_limit(n={n},k={k})", breaks=(a,))


def _power_antiderivative(p, lo, hi):
    """int_lo^hi s^p ds with the logarithmic case p = -1."""
    if p == -1.0:
        return np.log(hi / lo)
    return (hi ** (p + 1.0) - lo ** (p + 1.0)) / (p + 1.0)


def sphere_limit_origin_value(n, k) -> float:
    """G_{n,omega_k}(0) for the band kernel, in closed form.

    Equals G_n(1/2) + (k^2/S_{n-1}) int_a^{1/2} s^{1-n} (s - a)^2 ds with
    a = 1/2 - 1/k; the square of the band's partial integral carries k^2.
    Converges to G_n(1/2) from above at rate 1/k.
    """
    n, k = int(n), int(k)
    if k < 3:
        raise ValueError("sphere_limit_origin_value requires k >= 3")
    a = 0.5 - 1.0 / k
    # expand (s - a)^2 = s^2 - 2 a s + a^2 against s^{1-n}
    integral = (_power_antiderivative(3.0 - n, a, 0.5)
                - 2.0 * a * _power_antiderivative(2.0 - n, a, 0.5)
                + a * a * _power_antiderivative(1.0 - n, a, 0.5))
    return fundamental_solution(n, 0.5) + k * k / unit_sphere_area(n) * integral


def sphere_limit_green(n, r, tol=1e-10) -> float:
    """Averaged Green's function of the limiting sphere kernel:
    the double average over two spheres of radius 1/2.

    For r <= 1 this is G_n(1) plus the shell correction specialized to equal
    radii 1/2, whose inner beta integral runs to u^2; elementary for n = 3.
    The one-dimensional case is excluded here: the printed linear shell form
    fails the gluing identities (see the variants module).
    """
    n = int(n)
    if n < 2:
        raise ValueError("sphere_limit_green requires n >= 2; the n = 1 shell "
                         "candidates live in qlgreen.variants")
    r = float(r)
    if r < 0.0:
        raise ValueError("r must be nonnegative")
    if r > 1.0:
        return fundamental_solution(n, r)
    if n == 3:
        return (2.0 - r) / (4.0 * np.pi)
    base = fundamental_solution(n, 1.0)
    if r == 1.0:
        return base
    pref = 2.0 ** (n - 2) * unit_sphere_area(n - 1) / unit_sphere_area(n) ** 2

    def integrand(u):
        u = np.asarray(u, dtype=float)
        return u ** (1.0 - n) * incomplete_beta_symmetric(n, np.clip(u * u, 0.0, 1.0))

    est = adaptive_quad(integrand, r, 1.0, tol)
    return base + pref * est.value


# ---------------------------------------------------------------------------
# 3D exponential family
# ---------------------------------------------------------------------------

_ALPHA_MIN = 1e-3   # the normalization has a removable zero at alpha = 0
_ALPHA_MAX = 700.0  # keep e^alpha inside double range


def _check_alpha(alpha):
    alpha = float(alpha)
    if not np.isfinite(alpha) or abs(alpha) < _ALPHA_MIN or abs(alpha) > _ALPHA_MAX:
        raise ValueError(
            f"alpha must satisfy {_ALPHA_MIN} <= |alpha| <= {_ALPHA_MAX}; "
            f"got {alpha!r} (near zero the family tends to the constant "
            "half-ball density)")
    return alpha


def exp_normalization_denominator(alpha) -> float:
    """(alpha - 2) e^{alpha/2} + 2, written to avoid cancellation near zero.

    Behaves like alpha^2/4 as alpha -> 0 and is positive for alpha != 0.
    """
    alpha = float(alpha)
    return alpha * np.exp(alpha / 2.0) - 2.0 * np.expm1(alpha / 2.0)


def exp_normalization(alpha) -> float:
    """rho_alpha = alpha^2 / ((alpha - 2) e^{alpha/2} + 2); tends to 4 at 0."""
    alpha = _check_alpha(alpha)
    return alpha * alpha / exp_normalization_denominator(alpha)


def exp_kernel(alpha) -> RadialKernel:
    """omega_alpha(t) = rho_alpha e^{alpha t} / (2 pi t) on (0, 1/2), n = 3."""
    alpha = _check_alpha(alpha)
    rho = exp_normalization(alpha)

    def w(t):
        t = np.asarray(t, dtype=float)
        return rho / (2.0 * np.pi) * np.exp(alpha * t)

    def partial(s):
        s = np.asarray(s, dtype=float)
        # int_0^s t e^{alpha t} dt = (e^{alpha s}(alpha s - 1) + 1)/alpha^2
        return rho / (2.0 * np.pi) * (np.exp(alpha * s) * (alpha * s - 1.0) + 1.0) / alpha ** 2

    return RadialKernel(n=3, nu=0.5, w=w, partial=partial,
                        name=f"exp3d(alpha={alpha})")


def _exp_family_pieces(alpha):
    """Shared constants of the piecewise closed form (scaled by 4 pi)."""
    alpha = _check_alpha(alpha)
    rho = exp_normalization(alpha)
    beta = 2.0 * rho * rho / alpha ** 2
    ea = np.exp(alpha)
    eh = np.exp(alpha / 2.0)
    b_out = 1.0 - beta * ea / 2.0 + beta * ea * (2.0 * alpha - 3.0) / alpha ** 2
    b_in = -beta * (ea - 2.0) / alpha ** 2
    a_in = 2.0 + (2.0 * beta / alpha ** 2) * ((alpha - 2.0) * ea + 4.0 * eh - 2.0)
    return rho, beta, ea, eh, a_in, b_in, b_out


def _R_inner(alpha, r, pieces):
    rho, beta, ea, eh, a_in, b_in, _ = pieces
    if r < 1e-3:
        # series expansion: the 1/r terms cancel exactly at the origin
        c0 = a_in - beta * (ea + 1.0) / alpha
        c2 = beta * alpha * (1.0 - ea) / 6.0
        c3 = beta * alpha ** 2 * (ea + 2.0) / 24.0
        return c0 + c2 * r * r + c3 * r ** 3
    N = np.exp(alpha * (1.0 - r)) + np.exp(alpha * r) * (alpha * r - 2.0)
    return -beta * ea * r / 2.0 + beta / alpha ** 2 * N / r + a_in + b_in / r


def _R_outer(alpha, r, pieces):
    rho, beta, ea, eh, _, _, b_out = pieces
    return (-beta * ea * r / 2.0
            + beta * np.exp(alpha * r) * (3.0 + alpha - alpha * r) / (alpha ** 2 * r)
            + beta * ea * (alpha - 2.0) / alpha
            + b_out / r)


def exp_family_green(alpha, r) -> float:
    """G_{3,omega_alpha}(r): piecewise closed form, 1/(4 pi r) beyond r = 1."""
    alpha = _check_alpha(alpha)
    r = float(r)
    if r < 0.0:
        raise ValueError("r must be nonnegative")
    if r > 1.0:
        return 1.0 / (4.0 * np.pi * r)
    pieces = _exp_family_pieces(alpha)
    R = _R_inner(alpha, r, pieces) if r < 0.5 else _R_outer(alpha, r, pieces)
    return R / (4.0 * np.pi)


def exp_family_green_derivative(alpha, r) -> float:
    """d/dr of the piecewise closed form (used for the continuity checks)."""
    alpha = _check_alpha(alpha)
    r = float(r)
    if r < 0.0:
        raise ValueError("r must be nonnegative")
    pieces = _exp_family_pieces(alpha)
    rho, beta, ea, eh, a_in, b_in, b_out = pieces
    if r > 1.0:
        return -1.0 / (4.0 * np.pi * r * r)
    if r >= 0.5:
        num = (np.exp(alpha * r) / (r * r)
               * ((alpha * r - 1.0) * (3.0 + alpha - alpha * r) - alpha * r))
        dR = -beta * ea / 2.0 + beta / alpha ** 2 * num - b_out / (r * r)
    elif r < 1e-3:
        dR = (beta * alpha * (1.0 - ea) / 3.0 * r
              + beta * alpha ** 2 * (ea + 2.0) / 8.0 * r * r)
    else:
        N = np.exp(alpha * (1.0 - r)) + np.exp(alpha * r) * (alpha * r - 2.0)
        dN = (-alpha * np.exp(alpha * (1.0 - r))
              + alpha * np.exp(alpha * r) * (alpha * r - 1.0))
        dR = (-beta * ea / 2.0 + beta / alpha ** 2 * (dN / r - N / (r * r))
              - b_in / (r * r))
    return dR / (4.0 * np.pi)


def exp_family_origin_value(alpha) -> float:
    """phi(alpha) = G_{3,omega_alpha}(0); decreases to 1/(2 pi) as alpha grows."""
    alpha = _check_alpha(alpha)
    d = exp_normalization_denominator(alpha)
    num = (alpha - 3.0) * np.exp(alpha) + 4.0 * np.exp(alpha / 2.0) - 1.0
    return alpha / (2.0 * np.pi) * num / (d * d)


def exp_family_origin_laplacian(alpha) -> float:
    """psi(alpha) = A_3 G_{3,omega_alpha} at 0: the squared L2 norm of the
    density, (alpha^3/(2 pi)) (e^alpha - 1) / ((alpha-2) e^{alpha/2} + 2)^2."""
    alpha = _check_alpha(alpha)
    d = exp_normalization_denominator(alpha)
    return alpha ** 3 / (2.0 * np.pi) * np.expm1(alpha) / (d * d)


def exp_family_laplacian_minimizer(lo=1.0, hi=10.0, xtol=1e-9) -> float:
    """Golden-section minimizer of psi on [lo, hi]."""
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = float(lo), float(hi)
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc = exp_family_origin_laplacian(c)
    fd = exp_family_origin_laplacian(d)
    for _ in range(400):
        if b - a <= xtol:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = exp_family_origin_laplacian(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = exp_family_origin_laplacian(d)
    else:
        raise RuntimeError("golden-section search failed to bracket a minimum")
    return 0.5 * (a + b)


# ---------------------------------------------------------------------------
# 2D Bessel-cutoff family
# ---------------------------------------------------------------------------

_GL_X, _GL_W = np.polynomial.legendre.leggauss(12)


def bessel_cutoff_normalization(alpha) -> float:
    """kappa_alpha = 1 - J0(alpha/2)."""
    alpha = float(alpha)
    if alpha <= 0.0:
        raise ValueError("alpha must be positive")
    return 1.0 - _sp.j0(alpha / 2.0)


def bessel_cutoff_kernel(alpha) -> RadialKernel:
    """omega(s) = (alpha/(2 pi kappa)) J1(alpha s)/s on (0, 1/2), n = 2.

    The momentum-space sharp cutoff's coordinate profile, truncated to the
    half-ball; mixes both kinds of cutoff.
    """
    alpha = float(alpha)
    if alpha <= 0.0:
        raise ValueError("alpha must be positive")
    kap = bessel_cutoff_normalization(alpha)
    if kap == 0.0:
        raise ValueError("alpha with J0(alpha/2) = 1 is not normalizable")
    c = alpha / (2.0 * np.pi * kap)

    def w(t):
        t = np.asarray(t, dtype=float)
        # omega = t^{-1/2} w  =>  w = c J1(alpha t) / sqrt(t)
        return c * _sp.j1(alpha * t) / np.sqrt(t)

    def partial(s):
        s = np.asarray(s, dtype=float)
        # int_0^s t omega dt = (1 - J0(alpha s)) / (2 pi kappa)
        return (1.0 - _sp.j0(alpha * s)) / (2.0 * np.pi * kap)

    return RadialKernel(n=2, nu=0.5, w=w, partial=partial,
                        name=f"bessel2d(alpha={alpha})")


def kernel_fourier_profile(alpha, t, tol=1e-10) -> float:
    """Fourier profile of the truncated cutoff kernel at momentum alpha*t:
    kappa^{-1} int_0^{alpha/2} J0(s t) J1(s) ds.

    Equals 1 at t = 0 by normalization; tends (as alpha grows) to the sharp
    indicator of t < 1.  Panels are kept no wider than half the local
    oscillation period and doubled until the value settles.
    """
    alpha = float(alpha)
    t = float(t)
    if alpha <= 0.0 or t < 0.0:
        raise ValueError("kernel_fourier_profile requires alpha > 0 and t >= 0")
    b = alpha / 2.0
    npan = max(4, int(np.ceil(b * (1.0 + t) / np.pi)))
    prev = None
    val = 0.0
    for _ in range(16):
        edges = np.linspace(0.0, b, npan + 1)
        mid = 0.5 * (edges[1:] + edges[:-1])
        half = 0.5 * (edges[1:] - edges[:-1])
        nodes = (mid[:, None] + half[:, None] * _GL_X[None, :]).ravel()
        wts = (half[:, None] * _GL_W[None, :]).ravel()
        val = float(np.sum(wts * _sp.j0(nodes * t) * _sp.j1(nodes)))
        if prev is not None and abs(val - prev) <= tol * max(1.0, abs(val)):
            return val / bessel_cutoff_normalization(alpha)
        prev = val
        npan *= 2
    raise QuadratureError("oscillatory profile quadrature failed to settle",
                          OracleEstimate(val, abs(val - prev), npan, None))


def _theta_truncation(alpha, j, tol):
    """Truncation point T for the tail integral: the profile envelope beyond
    T, conservatively assumed to fall off like 1/t, must push the remaining
    mass below tol/10."""
    T = 2.0
    while True:
        m = max(abs(kernel_fourier_profile(alpha, tt, 1e-9))
                for tt in np.linspace(T, 2.0 * T, 9))
        m = 2.0 * m  # safety factor on the sampled envelope
        bound = 2.0 * np.pi * (m ** (2 * j) / (2 * j) + m ** (2 * j + 2) / (2 * j + 2))
        if bound < tol / 10.0:
            return T
        if T >= 1024.0:
            raise QuadratureError(
                f"tail truncation bound {bound:.2e} not achievable below "
                f"tol/10 = {tol / 10.0:.2e} within T <= 1024",
                OracleEstimate(0.0, bound, int(T), None))
        T *= 2.0


def renorm_functional(j, alpha, tol=1e-6):
    """Momentum-space renormalization functional
    theta_j = 2 pi int_0^inf (dt/t) (u^{2j+2} - u^{2j}), u the Fourier
    profile, split over (1, T), (1/2, 1), (0, 1/2).

    Returns (theta, (tail_part, transition_part, core_part)).  The t -> 0
    endpoint is regular (the profile reaches 1 quadratically), and the tail
    is truncated at T with the envelope bound below tol/10.
    """
    j = int(j)
    if j < 1:
        raise ValueError("j must be a positive integer")
    alpha = float(alpha)
    if alpha <= 0.0:
        raise ValueError("alpha must be positive")

    profile_tol = min(1e-10, tol * 1e-3)

    def integrand(t):
        u = kernel_fourier_profile(alpha, float(t), profile_tol)
        return 2.0 * np.pi / t * u ** (2 * j) * (u * u - 1.0)

    width = min(0.25, np.pi / alpha)  # quarter of the oscillation period in t

    def piece(lo, hi, ptol):
        cells = max(4, int(np.ceil((hi - lo) / width)))
        edges = np.linspace(lo, hi, cells + 1)
        total = 0.0
        achieved = 0.0
        for le, re in zip(edges[:-1], edges[1:]):
            est = adaptive_quad(integrand, le, re, ptol / cells,
                                max_panels=600, vectorized=False)
            total += est.value
            achieved += est.error
        return total, achieved

    T = _theta_truncation(alpha, j, tol)
    p3, e3 = piece(1e-9, 0.5, tol / 6.0)
    p2, e2 = piece(0.5, 1.0, tol / 6.0)
    p1, e1 = piece(1.0, T, tol / 6.0)
    return p1 + p2 + p3, (p1, p2, p3)


# ---------------------------------------------------------------------------
# plot-ready tables
# ---------------------------------------------------------------------------

def phi_psi_table(alphas):
    header = ["alpha", "phi", "psi"]
    rows = [[a, exp_family_origin_value(a), exp_family_origin_laplacian(a)]
            for a in alphas]
    return header, rows


def exp_profile_table(alpha, radii):
    header = ["r", "green_avg"]
    rows = [[r, exp_family_green(alpha, r)] for r in radii]
    return header, rows


def theta_table(j, alphas, tol=1e-6):
    header = ["alpha", "theta", "part_tail", "part_transition", "part_core"]
    rows = []
    for a in alphas:
        total, parts = renorm_functional(j, a, tol)
        rows.append([a, total, parts[0], parts[1], parts[2]])
    return header, rows


def sphere_limit_table(n, ks):
    header = ["k", "origin_value", "excess_over_limit"]
    limit = fundamental_solution(n, 0.5)
    rows = [[k, sphere_limit_origin_value(n, k),
             sphere_limit_origin_value(n, k) - limit] for k in ks]
    return header, rows
