"""Special-function backbone.

Domain-checked wrappers around ``scipy.special`` plus the combinations the
rest of the library needs everywhere: unit-sphere areas, Bessel J0/J1, the
symmetric incomplete beta integral, Fresnel integrals and the integral
sine/cosine.  Out-of-domain input raises immediately; nothing here returns
NaN.
"""

from __future__ import annotations

import numpy as np
from scipy import special as _sp

from scipy.special import beta, gamma  # noqa: F401  (re-exported)

__all__ = [
    "unit_sphere_area",
    "bessel_j",
    "incomplete_beta_symmetric",
    "fresnel",
    "si",
    "ci",
    "si_ci",
    "gamma",
    "beta",
]


def unit_sphere_area(n: int) -> float:
    """Area of the unit sphere S^{n-1} in R^n: 2 pi^{n/2} / Gamma(n/2).

    ``unit_sphere_area(1) == 2`` (the two-point "sphere" in one dimension).
    """
    if n != int(n) or n < 1:
        raise ValueError(f"dimension must be a positive integer, got {n!r}")
    n = int(n)
    return float(2.0 * np.pi ** (n / 2.0) / _sp.gamma(n / 2.0))


def bessel_j(order: int, x):
    """Bessel function of the first kind, order 0 or 1, for x >= 0."""
    if order not in (0, 1):
        raise ValueError(f"order must be 0 or 1, got {order!r}")
    x = np.asarray(x, dtype=float)
    if np.any(x < 0.0) or not np.all(np.isfinite(x)):
        raise ValueError("bessel_j requires finite x >= 0")
    out = _sp.j0(x) if order == 0 else _sp.j1(x)
    return float(out) if np.isscalar(out) or out.ndim == 0 else out


def incomplete_beta_symmetric(n: int, x):
    """int_0^x p^{(n-3)/2} (1-p)^{(n-3)/2} dp for integer n >= 2, x in [0, 1].

    n = 2 is evaluated through 2*arcsin(sqrt(x)), which is exact up to
    rounding and stays finite at both integrable endpoint singularities.
    """
    if n != int(n) or n < 2:
        raise ValueError(f"n must be an integer >= 2, got {n!r}")
    x = np.asarray(x, dtype=float)
    if np.any(x < 0.0) or np.any(x > 1.0) or not np.all(np.isfinite(x)):
        raise ValueError("incomplete_beta_symmetric requires x in [0, 1]")
    n = int(n)
    if n == 2:
        out = 2.0 * np.arcsin(np.sqrt(x))
    elif n == 3:
        out = x + 0.0
    else:
        a = (n - 1) / 2.0
        out = _sp.betainc(a, a, x) * _sp.beta(a, a)
    return float(out) if np.isscalar(out) or out.ndim == 0 else out


def fresnel(x):
    """Fresnel integrals (C(x), S(x)), normalized so both tend to 1/2.

    C(x) = int_0^x cos(pi t^2 / 2) dt and S(x) = int_0^x sin(pi t^2 / 2) dt.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x < 0.0) or not np.all(np.isfinite(x)):
        raise ValueError("fresnel requires finite x >= 0")
    s, c = _sp.fresnel(x)
    if np.isscalar(c) or np.asarray(c).ndim == 0:
        return float(c), float(s)
    return c, s


def si(x):
    """Shifted integral sine si(x) = Si(x) - pi/2, defined for x >= 0."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0.0) or not np.all(np.isfinite(x)):
        raise ValueError("si requires finite x >= 0")
    out = _sp.sici(x)[0] - np.pi / 2.0
    return float(out) if np.isscalar(out) or out.ndim == 0 else out


def ci(x):
    """Integral cosine Ci(x) for x > 0 (logarithmically singular at 0)."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0.0) or not np.all(np.isfinite(x)):
        raise ValueError("ci requires finite x > 0")
    out = _sp.sici(x)[1]
    return float(out) if np.isscalar(out) or out.ndim == 0 else out


def si_ci(x):
    """The pair (si(x), ci(x)); x must be positive since ci(0) diverges."""
    return si(x), ci(x)
