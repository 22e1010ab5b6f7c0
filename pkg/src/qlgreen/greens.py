"""Fundamental solutions of the Laplace operator and their scaling law.

The sign convention throughout the library is A_n = -Laplacian, so that
``A_n G_n = delta`` with a positive unit mass.
"""

from __future__ import annotations

import numpy as np

from .specfun import unit_sphere_area

__all__ = ["fundamental_solution", "fundamental_solution_scaled"]


def _check_dimension(n) -> int:
    if n != int(n) or n < 1:
        raise ValueError(f"dimension must be a positive integer, got {n!r}")
    return int(n)


def fundamental_solution(n: int, r):
    """G_n(r): -ln(r)/(2 pi) for n = 2, r^{2-n}/((n-2) S_{n-1}) otherwise.

    r must be positive for n >= 2 (the singularity at the origin is kept
    explicit); for n = 1 the value -r/2 extends continuously to r = 0.
    """
    n = _check_dimension(n)
    r = np.asarray(r, dtype=float)
    if not np.all(np.isfinite(r)):
        raise ValueError("fundamental_solution requires finite r")
    if n == 1:
        if np.any(r < 0.0):
            raise ValueError("fundamental_solution requires r >= 0 for n = 1")
        out = -r / 2.0
    else:
        if np.any(r <= 0.0):
            raise ValueError("fundamental_solution requires r > 0 for n >= 2")
        if n == 2:
            out = -np.log(r) / (2.0 * np.pi)
        else:
            out = r ** (2.0 - n) / ((n - 2.0) * unit_sphere_area(n))
    return float(out) if out.ndim == 0 else out


def fundamental_solution_scaled(n: int, r, lam):
    """G_n evaluated at r/lam, i.e. the averaging radius rescaled by lam.

    Equivalent closed forms: G_2(r) + ln(lam)/(2 pi) for n = 2 and
    lam^{n-2} G_n(r) otherwise.
    """
    lam = float(lam)
    if not np.isfinite(lam) or lam <= 0.0:
        raise ValueError(f"scale must be a positive real, got {lam!r}")
    r = np.asarray(r, dtype=float)
    return fundamental_solution(n, r / lam)
