"""Poisson extension into the upper half-space R^n_+ and normal traces.

Points of R^n_+ are ``(x, t)`` with ``x`` in R^(n-1) and height ``t > 0``.
The linear term ``C t`` of the general representation is always dropped.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from . import quadrature
from .measures import BoundaryMeasure, DimensionError, Patch, RadialProfile
from .reports import ConvergenceReport, make_report
from .specfun import kappa_n, sphere_area

__all__ = [
    "HalfSpacePoint",
    "ApproachPath",
    "poisson_kernel",
    "kernel_mass",
    "extend",
    "normal_trace_direct",
    "normal_trace_convolution",
    "lower_bound_check",
    "nt_values",
]


@dataclass(frozen=True)
class HalfSpacePoint:
    x: tuple[float, ...]
    t: float

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(float(v) for v in self.x))
        if not self.t > 0:
            raise ValueError("height t must be positive")


@dataclass(frozen=True)
class ApproachPath:
    """Points ``(base + aperture * t * direction, t)`` for decreasing heights ``t``."""

    base: tuple[float, ...]
    aperture: float
    direction: tuple[float, ...]
    heights: tuple[float, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "base", tuple(float(v) for v in self.base))
        object.__setattr__(self, "direction", tuple(float(v) for v in self.direction))
        object.__setattr__(self, "heights", tuple(float(v) for v in self.heights))
        if self.aperture < 0:
            raise ValueError("aperture must be nonnegative")
        if abs(math.hypot(*self.direction) - 1.0) > 1e-12:
            raise ValueError("direction must be a unit vector")
        hs = self.heights
        if any(h <= 0 for h in hs) or any(b >= a for a, b in zip(hs, hs[1:])):
            raise ValueError("heights must be positive and strictly decreasing")

    def points(self):
        b = np.asarray(self.base)
        d = np.asarray(self.direction)
        for t in self.heights:
            yield HalfSpacePoint(tuple(b + self.aperture * t * d), t)


def _kernel_r2(r2: float, t: float, n: int, kappa: float) -> float:
    # negative power: far points underflow to 0 instead of overflowing
    return kappa * t * (r2 + t * t) ** (-0.5 * n)


def poisson_kernel(x, t: float, n: int) -> float:
    """``K(x, t) = kappa_n t / (|x|^2 + t^2)^(n/2)``; ``x`` may be a vector or ``|x|``."""
    if not t > 0:
        raise ValueError("height t must be positive")
    r2 = float(np.dot(x, x)) if np.ndim(x) else float(x) ** 2
    return _kernel_r2(r2, t, n, kappa_n(n))


def kernel_mass(t: float, n: int) -> float:
    """Total mass of ``K(., t)`` over R^(n-1) by radial quadrature (should be 1)."""
    kappa = kappa_n(n)
    val, _ = quadrature.integrate_power(
        lambda r: _kernel_r2(r * r, t, n, kappa), n - 1, 0.0, math.inf, [t]
    )
    return sphere_area(n - 2) * val


# --------------------------------------------------------------------------
# component contributions


def _atoms_value(mu: BoundaryMeasure, x: np.ndarray, t: float, kappa: float) -> float:
    total = 0.0
    for a in mu.atoms:
        d = x - np.asarray(a.location)
        total += a.mass * _kernel_r2(float(np.dot(d, d)), t, mu.n, kappa)
    return total


def _radials_on_axis(mu: BoundaryMeasure, t: float, kappa: float) -> float:
    n = mu.n

    def g(r):
        return _kernel_r2(r * r, t, n, kappa)

    total = 0.0
    for lo, hi, c, e in mu.radial_pieces():
        val, _ = quadrature.integrate_power(g, e, lo, hi, [t, 10 * t])
        total += c * val
    return total


def _sphere_average(r: float, rho: float, t: float, n: int, kappa: float) -> float:
    """Mean of ``K(x - xi, t)`` over the sphere ``|xi| = r`` for ``|x| = rho``."""
    P = rho * rho + r * r + t * t
    Q = 2.0 * rho * r
    if n == 2:
        return 0.5 * kappa * t * (1.0 / (P - Q) + 1.0 / (P + Q))
    if n == 3:
        return kappa * t * (2.0 / math.pi) * special.ellipe(2.0 * Q / (P + Q)) / ((P - Q) * math.sqrt(P + Q))
    if n == 4:
        return kappa * t / ((P - Q) * (P + Q))
    raise DimensionError(f"off-axis evaluation is limited to n <= 4, got {n}")


def _radials_off_axis(mu: BoundaryMeasure, rho: float, t: float, kappa: float) -> float:
    n = mu.n
    pts = [t, rho] + [rho + s * k * t for s in (-1, 1) for k in (1, 10)]
    pts = [p for p in pts if p > 0]

    def g(r):
        return _sphere_average(r, rho, t, n, kappa)

    total = 0.0
    for lo, hi, c, e in mu.radial_pieces():
        val, _ = quadrature.integrate_power(g, e, lo, hi, pts)
        total += c * val
    return total


def _rect_corner_3(X: float, Y: float, t: float) -> float:
    # integral of t (X^2 + Y^2 + t^2)^(-3/2) over [0, X] x [0, Y]
    return math.atan2(X * Y, t * math.sqrt(X * X + Y * Y + t * t))


def _square_corner_4(Y: float, Z: float, a2: float) -> float:
    # integral of (a^2 + Y^2 + Z^2)^(-2) over [0, Y] x [0, Z]
    sy = math.sqrt(a2 + Y * Y)
    sz = math.sqrt(a2 + Z * Z)
    return (Y / sy * math.atan(Z / sy) + Z / sz * math.atan(Y / sz)) / (2.0 * a2)


def _patch_value(p: Patch, x: np.ndarray, t: float, n: int, kappa: float) -> float:
    if p.density == 0:
        return 0.0
    lo = np.asarray(p.lo) - x
    hi = np.asarray(p.hi) - x
    if n == 2:
        return p.density * (math.atan(hi[0] / t) - math.atan(lo[0] / t)) / math.pi
    if n == 3:
        s = (
            _rect_corner_3(hi[0], hi[1], t)
            - _rect_corner_3(lo[0], hi[1], t)
            - _rect_corner_3(hi[0], lo[1], t)
            + _rect_corner_3(lo[0], lo[1], t)
        )
        return p.density * kappa * s
    if n == 4:

        def slab(u):
            a2 = u * u + t * t
            return (
                _square_corner_4(hi[1], hi[2], a2)
                - _square_corner_4(lo[1], hi[2], a2)
                - _square_corner_4(hi[1], lo[2], a2)
                + _square_corner_4(lo[1], lo[2], a2)
            )

        pts = [0.0] + [s * k * t for s in (-1, 1) for k in (1, 10)]
        val, _ = quadrature.integrate_segments(slab, lo[0], hi[0], pts)
        return p.density * kappa * t * val
    raise DimensionError(f"patch evaluation is limited to n <= 4, got {n}")


# --------------------------------------------------------------------------
# public evaluation


def extend(mu: BoundaryMeasure, p) -> float:
    """Poisson extension ``u(x, t) = integral of K(x - xi, t) dmu(xi)``.

    ``p`` is a ``HalfSpacePoint`` or an ``(x, t)`` pair.  On the axis ``x = O``
    any dimension is supported; elsewhere the boundary dimension must be <= 3.
    """
    if not isinstance(p, HalfSpacePoint):
        p = HalfSpacePoint(*p)
    n, t = mu.n, p.t
    x = np.asarray(p.x, dtype=float)
    if x.shape != (mu.m,):
        raise ValueError(f"x must have {mu.m} coordinates")
    kappa = kappa_n(n)
    # atoms first so the total can only grow from the atomic part
    total = _atoms_value(mu, x, t, kappa)
    if mu.radials:
        rho = float(np.linalg.norm(x))
        if rho == 0.0:
            total += _radials_on_axis(mu, t, kappa)
        else:
            if n > 4:
                raise DimensionError(f"off-axis evaluation is limited to n <= 4, got {n}")
            total += _radials_off_axis(mu, rho, t, kappa)
    for patch in mu.patches:
        total += _patch_value(patch, x, t, n, kappa)
    return total


def normal_trace_direct(mu: BoundaryMeasure, t: float) -> float:
    """``u(0, t)`` as a Stieltjes integral of the kernel against ``d mu(B(r))``."""
    return extend(mu, HalfSpacePoint((0.0,) * mu.m, t))


def normal_trace_convolution(mu: BoundaryMeasure, t: float, profile: RadialProfile | None = None) -> float:
    """``u(0, t)`` from the integrated-by-parts form.

    ``u(0, t) = integral over r > 0 of n c r t / (r^2 + t^2)^(n/2 + 1) mu(B(r)) dr``,
    evaluated in ``w = log(r / t)`` against the closed-form cumulative.
    """
    if not t > 0:
        raise ValueError("height t must be positive")
    if profile is None:
        profile = RadialProfile.from_measure(mu)
    n = mu.n
    nc = n * kappa_n(n)
    F = profile.cumulative

    def integrand(w):
        if w > 600.0:
            return 0.0
        s = math.exp(w)
        if s > 1.0:
            weight = s ** (-n) * (1.0 + 1.0 / (s * s)) ** (-0.5 * n - 1.0)
        else:
            weight = s * s / (1.0 + s * s) ** (0.5 * n + 1.0)
        return nc * weight * F(t * s)

    pts = [0.0] + [math.log(b / t) for b in profile.breakpoints]
    # purely relative: the value is rescaled by t^(1-n) afterwards
    val, _ = quadrature.integrate_segments(integrand, -math.inf, math.inf, pts, epsabs=0.0, epsrel=1e-12)
    return val * t ** (1 - n)


def lower_bound_check(mu: BoundaryMeasure, t: float) -> tuple[float, float, bool]:
    """``u(0, t)`` against the minorant from the kernel mass on ``[t, 2t]``.

    ``u(0, t) >= mu(B(t)) * integral_t^2t n c r t / (r^2 + t^2)^(n/2 + 1) dr
    = c (2^(-n/2) - 5^(-n/2)) M(t)``.
    """
    n = mu.n
    u = normal_trace_direct(mu, t)
    K1 = kappa_n(n) * (2.0 ** (-0.5 * n) - 5.0 ** (-0.5 * n))
    profile = RadialProfile.from_measure(mu)
    bound = K1 * profile.M(t)
    return u, bound, u >= bound


def nt_values(mu: BoundaryMeasure, path: ApproachPath, tol_limit: float = 1e-3) -> ConvergenceReport:
    """Values of ``u`` along a (possibly non-tangential) approach path."""
    if path.aperture > 0 and mu.n > 4:
        raise DimensionError("non-normal approach paths need n <= 4")
    values = [extend(mu, p) for p in path.points()]
    report = make_report(path.heights, values, tol_limit=tol_limit)
    report.details.update({"aperture": path.aperture, "direction": list(path.direction)})
    return report
