"""Admissible radial averaging kernels.

A kernel is a nonnegative density omega on the ball of radius 1/2,
factored as omega(t) = t^{-(n - [n==1])/2 + nu} * w(t) with w integrable and
nonnegative.  ``normalize`` rescales so that the density integrates to one
over R^n.  Kernels may carry an exact partial integral
P(s) = int_0^s t^{n-1} omega(t) dt, which the value-at-zero functionals
prefer for accuracy near s -> 0; otherwise the partial integral falls back
to adaptive quadrature.
"""

from __future__ import annotations

import dataclasses
import io
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .oracles import QuadratureError, adaptive_quad
from .specfun import unit_sphere_area

__all__ = [
    "RadialKernel",
    "normalize",
    "kernel_from_callable",
    "kernel_from_table",
    "parse_kernel_table",
    "ball_kernel",
    "power_kernel",
    "gap_kernel",
]


@dataclass(frozen=True)
class RadialKernel:
    """Radial averaging density supported in [0, 1/2].

    ``w`` is the integrable factor (vectorized callable on (0, 1/2)); ``nu``
    the exponent parameter; ``eps_gap``, when set, asserts w == 0 on
    [0, eps_gap].  ``partial``, when given, must be the exact map
    s -> int_0^s t^{n-1} omega_unscaled(t) dt.  ``scale`` is adjusted by
    normalize() and multiplies both omega and partial.
    """

    n: int
    nu: float
    w: Callable[[np.ndarray], np.ndarray]
    eps_gap: float | None = None
    partial: Callable[[np.ndarray], np.ndarray] | None = None
    scale: float = 1.0
    name: str = "kernel"
    breaks: tuple = ()  # interior radii where the density has kinks or jumps

    def __post_init__(self):
        if self.n != int(self.n) or self.n < 1:
            raise ValueError(f"dimension must be a positive integer, got {self.n!r}")
        if self.eps_gap is not None and not (0.0 < self.eps_gap < 0.5):
            raise ValueError("eps_gap must lie in (0, 1/2)")

    @property
    def exponent(self) -> float:
        delta = 1.0 if self.n == 1 else 0.0
        return -(self.n - delta) / 2.0 + self.nu

    def omega(self, t):
        """Density value(s); zero outside the open support."""
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        lo = self.eps_gap if self.eps_gap else 0.0
        inside = (t > lo) & (t <= 0.5)
        if np.any(inside):
            ti = t[inside]
            out[inside] = self.scale * ti ** self.exponent * np.asarray(self.w(ti), dtype=float)
        return float(out) if out.ndim == 0 else out

    def radial_weight(self, t):
        """t^{n-1} * omega(t), the weight appearing in all radial integrals."""
        t = np.asarray(t, dtype=float)
        return t ** (self.n - 1) * self.omega(t)

    def partial_integral(self, s, tol=1e-12):
        """P(s) = int_0^s t^{n-1} omega(t) dt (exact if available)."""
        s = np.asarray(s, dtype=float)
        if self.partial is not None:
            out = self.scale * np.asarray(self.partial(np.clip(s, 0.0, 0.5)), dtype=float)
            return float(out) if out.ndim == 0 else out
        lo = self.eps_gap if self.eps_gap else 0.0

        def one(si):
            hi = min(float(si), 0.5)
            if hi <= lo:
                return 0.0
            return adaptive_quad(self.radial_weight, lo, hi, tol).value

        if s.ndim == 0:
            return one(s)
        return np.array([one(si) for si in s])

    def w_l1_norm(self, tol=1e-11) -> float:
        """L1 norm of the scaled integrable factor over (0, 1/2)."""
        lo = self.eps_gap if self.eps_gap else 0.0
        f = lambda t: np.abs(self.scale * np.asarray(self.w(t), dtype=float))
        return adaptive_quad(f, lo, 0.5, tol).value

    def normalized(self, tol=1e-10) -> "RadialKernel":
        return normalize(self, tol)

    def with_scale(self, scale: float) -> "RadialKernel":
        return dataclasses.replace(self, scale=scale)


def normalize(kernel: RadialKernel, tol=1e-10) -> RadialKernel:
    """Rescale so that int_{R^n} omega(|x|) d^n x = 1.

    Rejects densities whose radial integral is zero, negative, or fails to
    converge.
    """
    sn = unit_sphere_area(kernel.n)
    if kernel.partial is not None:
        total = sn * kernel.scale * float(kernel.partial(0.5))
    else:
        lo = kernel.eps_gap if kernel.eps_gap else 0.0
        try:
            total = sn * adaptive_quad(kernel.radial_weight, lo, 0.5, tol).value
        except QuadratureError as exc:
            raise ValueError(f"kernel density is not integrable: {exc}") from exc
    if not np.isfinite(total) or total <= 0.0:
        raise ValueError(f"kernel density has non-positive mass {total!r}")
    return kernel.with_scale(kernel.scale / total)


def kernel_from_callable(n, nu, w, *, eps_gap=None, partial=None,
                         name="custom", auto_normalize=True) -> RadialKernel:
    """Wrap a vectorized density factor w(t) as a RadialKernel."""
    kernel = RadialKernel(n=int(n), nu=float(nu), w=w, eps_gap=eps_gap,
                          partial=partial, name=name)
    return kernel.normalized() if auto_normalize else kernel


def parse_kernel_table(source) -> tuple[np.ndarray, np.ndarray]:
    """Parse two-column numeric text (t, w(t)).

    Rows must have strictly increasing t inside (0, 1/2) and nonnegative w.
    Lines starting with '#' are comments.
    """
    if hasattr(source, "read"):
        text = source.read()
    else:
        text = str(source)
    rows = []
    for lineno, line in enumerate(io.StringIO(text), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.replace(",", " ").split()
        if len(parts) != 2:
            raise ValueError(f"kernel table line {lineno}: expected two columns, got {stripped!r}")
        try:
            rows.append((float(parts[0]), float(parts[1])))
        except ValueError as exc:
            raise ValueError(f"kernel table line {lineno}: non-numeric entry") from exc
    if len(rows) < 2:
        raise ValueError("kernel table needs at least two rows")
    t = np.array([p[0] for p in rows])
    w = np.array([p[1] for p in rows])
    if np.any(t <= 0.0) or np.any(t >= 0.5):
        raise ValueError("kernel table abscissae must lie strictly inside (0, 1/2)")
    if np.any(np.diff(t) <= 0.0):
        raise ValueError("kernel table abscissae must be strictly increasing")
    if np.any(w < 0.0):
        raise ValueError("kernel table values must be nonnegative")
    return t, w


def kernel_from_table(n, nu, source, *, eps_gap=None, name="tabulated") -> RadialKernel:
    """Kernel whose w is the linear interpolant of a two-column table.

    Outside the tabulated range the density is zero.
    """
    t, w = parse_kernel_table(source)

    def w_interp(x):
        x = np.asarray(x, dtype=float)
        return np.interp(x, t, w, left=0.0, right=0.0)

    kern = RadialKernel(n=int(n), nu=float(nu), w=w_interp, eps_gap=eps_gap,
                        name=name, breaks=tuple(t))
    return kern.normalized()


def ball_kernel(n) -> RadialKernel:
    """Constant density on the half-ball, omega = n 2^n / S_{n-1}."""
    n = int(n)
    delta = 1.0 if n == 1 else 0.0
    nu = (n - delta) / 2.0  # makes omega(t) = scale * w constant
    const = n * 2.0 ** n / unit_sphere_area(n)
    w = lambda t: np.full_like(np.asarray(t, dtype=float), const)
    partial = lambda s: const * np.asarray(s, dtype=float) ** n / n
    return RadialKernel(n=n, nu=nu, w=w, partial=partial, name=f"ball(n={n})")


def power_kernel(n, nu, p, *, auto_normalize=True) -> RadialKernel:
    """Kernel with w(t) = t^p (p > -1 so that w stays integrable)."""
    if p <= -1.0:
        raise ValueError("power_kernel requires p > -1")
    delta = 1.0 if int(n) == 1 else 0.0
    expo_total = (int(n) - 1) - (int(n) - delta) / 2.0 + float(nu) + float(p)

    def partial(s):
        s = np.asarray(s, dtype=float)
        return s ** (expo_total + 1.0) / (expo_total + 1.0)

    kern = RadialKernel(n=int(n), nu=float(nu), w=lambda t: np.asarray(t, float) ** p,
                        partial=partial, name=f"power(n={n},nu={nu},p={p})")
    return kern.normalized() if auto_normalize else kern


def gap_kernel(n, nu, eps, *, auto_normalize=True) -> RadialKernel:
    """w = 1 on (eps, 1/2) and 0 below: the simplest gap kernel."""
    if not (0.0 < eps < 0.5):
        raise ValueError("gap_kernel requires 0 < eps < 1/2")

    def w(t):
        t = np.asarray(t, dtype=float)
        return np.where(t > eps, 1.0, 0.0)

    kern = RadialKernel(n=int(n), nu=float(nu), w=w, eps_gap=float(eps),
                        name=f"gap(n={n},nu={nu},eps={eps})", breaks=(float(eps),))
    return kern.normalized() if auto_normalize else kern
