"""Closed-form candidates that fail verification.

Each function here is an alternative transcription of a quantity the library
computes elsewhere from first principles.  They are kept, clearly separated,
so the test suite can demonstrate the failure with concrete numbers instead
of silently shipping only the corrected forms.  None of these belong in
production paths.
"""

from __future__ import annotations

import numpy as np

from .greens import fundamental_solution
from .specfun import unit_sphere_area

__all__ = [
    "shell_correction_linear_1d",
    "half_sphere_profile_linear_1d",
    "sphere_limit_origin_value_unsquared",
]


def shell_correction_linear_1d(r, s, t) -> float:
    """Candidate n = 1 shell correction (r - t - s)/2.

    Fails the inner gluing identity: the defining four-point average forces
    (t + s - r)/4 on the shell instead.
    """
    return (float(r) - float(t) - float(s)) / 2.0


def half_sphere_profile_linear_1d(r) -> float:
    """Candidate n = 1 equal-half-radii shell correction (r - 1)/2.

    The four-point average at s = t = 1/2 forces (1 - r)/4 instead.
    """
    return (float(r) - 1.0) / 2.0


def sphere_limit_origin_value_unsquared(n, k) -> float:
    """Candidate band-kernel value at zero with the plain band integral
    G_n(1/2) + (1/S_{n-1}) int (s - a)^2 s^{1-n} ds.

    Misses the k^2 factor carried by the squared partial integral of the
    band density; it understates the excess over G_n(1/2) by the factor k^2
    and decays like k^{-3} instead of the true k^{-1}.
    """
    n, k = int(n), int(k)
    a = 0.5 - 1.0 / k
    xs = np.linspace(a, 0.5, 20001)
    vals = xs ** (1.0 - n) * (xs - a) ** 2
    integral = np.trapezoid(vals, xs)
    return fundamental_solution(n, 0.5) + integral / unit_sphere_area(n)
