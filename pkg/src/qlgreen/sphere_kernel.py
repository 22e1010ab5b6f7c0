"""Closed-form double-sphere average of the fundamental solution.

``double_sphere_average(n, r, s, t)`` is the mean of G_n(|x + s y + t z|)
over independent uniform directions y, z on the unit sphere, with |x| = r.
It is piecewise in three radial regions:

* inner  (r < |t - s|):       G_n(max(t, s)), constant in r;
* shell  (|t-s| <= r <= t+s): G_n(t + s) plus a shell correction;
* outer  (r > t + s):         G_n(r), as if the spheres were points.

The shell correction reduces to a one-dimensional integral of the symmetric
incomplete beta function; for n = 1 and n = 3 it is elementary.  The radial
derivative and radial Laplacian of the average are available in closed form,
together with the two gluing residuals that make the average continuous
across the region boundaries.
"""

from __future__ import annotations

import enum

import numpy as np

from .greens import fundamental_solution
from .oracles import adaptive_quad
from .specfun import incomplete_beta_symmetric, unit_sphere_area

__all__ = [
    "Region",
    "classify",
    "shell_correction",
    "double_sphere_average",
    "radial_derivative",
    "radial_laplacian",
    "gluing_residuals",
]


class Region(enum.Enum):
    INNER = "inner"
    SHELL = "shell"
    OUTER = "outer"


def _check_triple(r, s, t):
    r, s, t = float(r), float(s), float(t)
    if min(r, s, t) < 0.0 or not all(map(np.isfinite, (r, s, t))):
        raise ValueError("radii must be finite and nonnegative")
    if r == 0.0 and s == 0.0 and t == 0.0:
        raise ValueError("(r, s, t) must not all vanish")
    return r, s, t


def _check_dim(n, minimum=1):
    if n != int(n) or n < minimum:
        raise ValueError(f"dimension must be an integer >= {minimum}, got {n!r}")
    return int(n)


def classify(r, s, t) -> Region:
    """Radial region of the evaluation point; both boundaries count as SHELL."""
    r, s, t = _check_triple(r, s, t)
    if r < abs(t - s):
        return Region.INNER
    if r <= t + s:
        return Region.SHELL
    return Region.OUTER


def _four_point_average(r, s, t):
    # n = 1: the spheres are the two-point sets {-s, s} and {-t, t}
    total = 0.0
    for es in (-1.0, 1.0):
        for et in (-1.0, 1.0):
            total += abs(r + es * s + et * t)
    return -total / 8.0


def _shell_prefactor(n):
    return 2.0 ** (n - 2) * unit_sphere_area(n - 1) / unit_sphere_area(n) ** 2


def shell_correction(n, r, s, t, tol=1e-11) -> float:
    """Shell-region correction g_n(r, s, t) added to G_n(t + s).

    Defined for |t - s| <= r <= t + s.  For n = 1 the exact value
    (t + s - r)/4 follows from the four-point average (the shell values glue
    continuously onto both neighbouring regions, which pins the formula
    down); n = 3 has an elementary antiderivative; even n = 2 reduces to an
    arcsine integrand that stays integrable in the equal-radius limit.

    ``tol`` is absolute for corrections of order one; when the correction
    spans many orders of magnitude (small radii in high dimension) it is
    applied relative to that span, which is the best doubles can certify.
    """
    n = _check_dim(n)
    r, s, t = _check_triple(r, s, t)
    d = abs(t - s)
    if not (d <= r <= t + s) and not np.isclose(r, t + s) and not np.isclose(r, d):
        raise ValueError("shell_correction requires |t - s| <= r <= t + s")
    if n == 1:
        return (t + s - r) / 4.0
    if r >= t + s:
        return 0.0
    ts4 = 4.0 * t * s
    if ts4 == 0.0:
        # degenerate shell: the region is the single point r = t + s
        return 0.0
    if n == 3:
        term = 0.0 if d == 0.0 else d * d * (1.0 / (t + s) - 1.0 / r)
        return ((t + s - r) + term) / (16.0 * np.pi * t * s)

    pref = _shell_prefactor(n)

    def integrand(u):
        x = np.clip((u * u - d * d) / ts4, 0.0, 1.0)
        return u ** (1.0 - n) * incomplete_beta_symmetric(n, x)

    span = abs(fundamental_solution(n, max(t, s))
               - fundamental_solution(n, t + s))
    est = adaptive_quad(integrand, r, t + s, tol * max(1.0, span) / pref)
    return pref * est.value


def double_sphere_average(n, r, s, t, tol=1e-11) -> float:
    """Average of G_n over two spheres of radii s and t, observed at radius r."""
    n = _check_dim(n)
    r, s, t = _check_triple(r, s, t)
    if n == 1:
        return _four_point_average(r, s, t)
    region = classify(r, s, t)
    if region is Region.INNER:
        return fundamental_solution(n, max(t, s))
    if region is Region.OUTER:
        return fundamental_solution(n, r)
    return fundamental_solution(n, t + s) + shell_correction(n, r, s, t, tol)


def _average_over_t(n, r, s, t, tol=1e-11):
    """Vectorized double_sphere_average over an array of t (r, s fixed)."""
    t = np.asarray(t, dtype=float)
    if n == 1:
        total = np.zeros_like(t)
        for es in (-1.0, 1.0):
            for et in (-1.0, 1.0):
                total += np.abs(r + es * s + et * t)
        return -total / 8.0
    out = np.empty_like(t)
    d = np.abs(t - s)
    inner = r < d
    outer = r > t + s
    shell = ~(inner | outer)
    if np.any(inner):
        out[inner] = fundamental_solution(n, np.maximum(t[inner], s))
    if np.any(outer):
        out[outer] = fundamental_solution(n, r)
    if np.any(shell):
        tsh = t[shell]
        if n == 3:
            dd = np.abs(tsh - s)
            term = np.where(dd == 0.0, 0.0,
                            dd * dd * (1.0 / (tsh + s) - 1.0 / max(r, 1e-300)))
            corr = ((tsh + s - r) + term) / (16.0 * np.pi * tsh * s)
            out[shell] = fundamental_solution(n, tsh + s) + corr
        else:
            vals = [double_sphere_average(n, r, s, float(ti), tol) for ti in tsh]
            out[shell] = np.array(vals)
    return out


def _derivative_shell_factor(n, r, s, t):
    """h_n(r; s, t): rises from 0 at r = |t - s| to 1 at r = t + s."""
    ts4 = 4.0 * t * s
    if ts4 == 0.0:
        return 1.0  # degenerate shell, single point r = t + s
    d = abs(t - s)
    x = np.clip((r * r - d * d) / ts4, 0.0, 1.0)
    return (2.0 ** (n - 2) * unit_sphere_area(n - 1) / unit_sphere_area(n)
            * incomplete_beta_symmetric(n, x))


def radial_derivative(n, r, s, t) -> float:
    """d/dr of the double-sphere average, n >= 2 (continuous in r).

    For n = 1 the derivative jumps at the region boundaries and this closed
    form does not apply, so n = 1 is rejected.
    """
    n = _check_dim(n, minimum=2)
    r, s, t = _check_triple(r, s, t)
    region = classify(r, s, t)
    if region is Region.INNER:
        return 0.0
    if r == 0.0:
        # only reachable with s = t; the one-sided limit is finite and nonzero
        pref = (2.0 ** (n - 2) * unit_sphere_area(n - 1)
                / unit_sphere_area(n) ** 2) * 2.0 / (n - 1.0)
        return -pref * (2.0 * t) ** (1.0 - n)
    scale = -(r ** (1.0 - n)) / unit_sphere_area(n)
    if region is Region.OUTER:
        return scale
    return scale * _derivative_shell_factor(n, r, s, t)


def _laplacian_on_shell(n, r, s, t):
    core = (r * r - (t - s) ** 2) * ((t + s) ** 2 - r * r)
    return (2.0 * unit_sphere_area(n - 1) / unit_sphere_area(n) ** 2
            * (2.0 * t * s * r) ** (2.0 - n) * core ** ((n - 3) / 2.0))


def radial_laplacian(n, r, s, t) -> float:
    """A_n applied to the double-sphere average (A_n = -Laplacian), n >= 2.

    Vanishes off the closed shell; on the open shell it is the nonnegative
    density whose radial integral carries unit mass.  For n = 2 and n = 3 the
    shell boundaries are genuine singular/discontinuity points and evaluation
    exactly there is rejected.
    """
    n = _check_dim(n, minimum=2)
    r, s, t = _check_triple(r, s, t)
    d = abs(t - s)
    on_boundary = (r == d) or (r == t + s)
    if on_boundary and n in (2, 3):
        raise ValueError("radial_laplacian is singular/discontinuous at the "
                         "shell boundaries for n in {2, 3}; evaluate on the "
                         "open shell only")
    if r <= d or r >= t + s:
        return 0.0
    return _laplacian_on_shell(n, r, s, t)


def _laplacian_over_r(n, r, s, t):
    """Vectorized radial_laplacian over interior shell radii (no boundary
    checks; callers supply open-interval nodes)."""
    r = np.asarray(r, dtype=float)
    out = np.zeros_like(r)
    d = abs(t - s)
    inside = (r > d) & (r < t + s)
    if np.any(inside):
        ri = r[inside]
        core = (ri * ri - d * d) * ((t + s) ** 2 - ri * ri)
        out[inside] = (2.0 * unit_sphere_area(n - 1) / unit_sphere_area(n) ** 2
                       * (2.0 * t * s * ri) ** (2.0 - n)
                       * core ** ((n - 3) / 2.0))
    return out


def gluing_residuals(n, s, t, tol=1e-11):
    """Residuals of the two continuity identities of the shell correction.

    inner: g_n(|t-s|, s, t) - [G_n(max(t, s)) - G_n(t + s)]
    outer: g_n(t+s, s, t)

    Both vanish for the true shell correction; they are returned as computed
    numbers so tests can bound them.
    """
    n = _check_dim(n, minimum=2)
    s, t = float(s), float(t)
    if s < 0.0 or t < 0.0 or (s == 0.0 and t == 0.0):
        raise ValueError("(s, t) must be nonnegative and not both zero")
    d = abs(t - s)
    inner = (shell_correction(n, d, s, t, tol)
             - (fundamental_solution(n, max(t, s)) - fundamental_solution(n, t + s)))
    outer = shell_correction(n, t + s, s, t, tol)
    return inner, outer
