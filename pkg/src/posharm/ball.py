"""Positive harmonic functions in the unit ball via the Poisson kernel.

Boundary measures on the unit sphere are described relative to a base
point ``x0``: densities depend only on the chordal distance ``rho = |zeta - x0|``.
On S^(n-1) the surface element in that variable is
``sigma_(n-2) rho^(n-2) (1 - rho^2/4)^((n-3)/2) d rho`` (times the normalized
angular measure), so caps and annuli integrate in one dimension.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import special

from . import quadrature
from .measures import Atom, BoundaryMeasure, DimensionError, TabulatedRadial
from .specfun import DomainError, _check_dimension, sphere_area

__all__ = [
    "SupportError",
    "Cap",
    "CapPatch",
    "SphereAtom",
    "SphereMeasure",
    "BallPoint",
    "ball_kernel",
    "kernel_ratio",
    "cap_mass",
    "cap_power_measure",
    "uniform_sphere_measure",
    "sphere_cubature",
    "ball_extend",
    "chordal_to_projected",
    "projected_to_chordal",
    "project_pushforward",
    "tangent_projection",
    "DistanceRatios",
    "distance_ratio_probe",
]

CAP_MASS_RTOL = 1e-10
EXTEND_RTOL = 1e-8
PUSHFORWARD_RADII = 400
# the tabulated pushforward starts this many decades below the cap radius
PUSHFORWARD_DECADES = 8.0


class SupportError(ValueError):
    """Measure has mass outside the cap where the projection is taken."""


def _unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    norm = np.linalg.norm(v)
    if not norm > 0:
        raise ValueError("zero vector has no direction")
    return v / norm


@dataclass(frozen=True)
class Cap:
    """Density ``coeff * rho^q`` on the chordal annulus ``r0 <= rho < r1`` around ``x0``."""

    coeff: float
    q: float
    r0: float = 0.0
    r1: float = 2.0

    def __post_init__(self):
        if not self.coeff > 0:
            raise ValueError("cap coefficient must be positive")
        if not (0.0 <= self.r0 < self.r1 <= 2.0):
            raise ValueError("need 0 <= r0 < r1 <= 2 for chordal radii")


@dataclass(frozen=True)
class CapPatch:
    """Constant density on the chordal annulus ``r0 <= rho < r1`` around ``x0``."""

    r0: float
    r1: float
    density: float

    def __post_init__(self):
        if not (0.0 <= self.r0 < self.r1 <= 2.0):
            raise ValueError("need 0 <= r0 < r1 <= 2 for chordal radii")
        if self.density < 0:
            raise ValueError("density must be nonnegative")

    def as_cap(self) -> Cap | None:
        return Cap(self.density, 0.0, self.r0, self.r1) if self.density > 0 else None


@dataclass(frozen=True)
class SphereAtom:
    zeta: tuple[float, ...]
    mass: float

    def __post_init__(self):
        z = tuple(float(x) for x in self.zeta)
        if abs(math.sqrt(sum(x * x for x in z)) - 1.0) > 1e-12:
            raise ValueError("sphere atoms must sit on the unit sphere")
        if not self.mass > 0:
            raise ValueError("atom mass must be positive")
        object.__setattr__(self, "zeta", z)


@dataclass(frozen=True)
class SphereMeasure:
    n: int
    base_point: tuple[float, ...]
    caps: tuple[Cap, ...] = ()
    atoms: tuple[SphereAtom, ...] = ()
    patches: tuple[CapPatch, ...] = ()

    def __post_init__(self):
        _check_dimension(self.n)
        x0 = tuple(float(x) for x in self.base_point)
        if len(x0) != self.n or abs(math.sqrt(sum(x * x for x in x0)) - 1.0) > 1e-12:
            raise ValueError("base point must be a unit vector in R^n")
        object.__setattr__(self, "base_point", x0)
        object.__setattr__(self, "caps", tuple(self.caps))
        object.__setattr__(self, "atoms", tuple(self.atoms))
        object.__setattr__(self, "patches", tuple(self.patches))
        for c in self.caps:
            if c.r0 == 0.0 and not c.q > -(self.n - 1):
                raise ValueError(f"cap density rho^{c.q} is not integrable in dimension {self.n - 1}")
        for a in self.atoms:
            if len(a.zeta) != self.n:
                raise ValueError("atom dimension mismatch")

    def density_caps(self) -> list[Cap]:
        return list(self.caps) + [c for c in (p.as_cap() for p in self.patches) if c is not None]

    def total_mass(self) -> float:
        return cap_mass(self, 2.0)

    def __add__(self, other: "SphereMeasure") -> "SphereMeasure":
        if other.n != self.n or other.base_point != self.base_point:
            raise ValueError("can only add measures with the same dimension and base point")
        return SphereMeasure(
            self.n,
            self.base_point,
            self.caps + other.caps,
            self.atoms + other.atoms,
            self.patches + other.patches,
        )


@dataclass(frozen=True)
class BallPoint:
    y: tuple[float, ...]

    def __post_init__(self):
        y = tuple(float(v) for v in self.y)
        if not math.sqrt(sum(v * v for v in y)) < 1.0:
            raise ValueError("ball points need |y| < 1")
        object.__setattr__(self, "y", y)

    @property
    def depth(self) -> float:
        """Distance to the sphere, ``1 - |y|``."""
        return 1.0 - math.sqrt(sum(v * v for v in self.y))


def _as_point(y) -> np.ndarray:
    if not isinstance(y, BallPoint):
        y = BallPoint(tuple(y))
    return np.asarray(y.y)


# --------------------------------------------------------------------------
# kernel


def ball_kernel(zeta, y, n: int) -> float:
    """``(1 - |y|^2) / (sigma_(n-1) |zeta - y|^n)``."""
    y = _as_point(y)
    zeta = np.asarray(zeta, dtype=float)
    d2 = float(np.dot(zeta - y, zeta - y))
    return (1.0 - float(np.dot(y, y))) / (sphere_area(n - 1) * d2 ** (0.5 * n))


def kernel_ratio(zeta, y, n: int) -> float:
    """``ball_kernel / (kappa_n d(y) / |zeta - y|^n)`` with ``d(y) = 1 - |y|``."""
    y = _as_point(y)
    zeta = np.asarray(zeta, dtype=float)
    d = 1.0 - float(np.linalg.norm(y))
    kappa = 2.0 / sphere_area(n - 1)
    return ball_kernel(zeta, y, n) / (kappa * d / float(np.linalg.norm(zeta - y)) ** n)


# --------------------------------------------------------------------------
# cap masses


def _area_factor(rho: float, n: int) -> float:
    # dS / (sigma_(n-2) rho^(n-2) d rho)
    if n == 3:
        return 1.0
    return max(0.0, 1.0 - 0.25 * rho * rho) ** (0.5 * (n - 3))


def _cap_piece_mass(c: Cap, r: float, n: int) -> float:
    top = min(r, c.r1)
    if top <= c.r0:
        return 0.0
    e = c.q + n - 1
    if n == 3:
        # area factor is 1: exact
        return c.coeff * sphere_area(1) * (top**e - c.r0**e) / e
    val, _ = quadrature.integrate_power(
        lambda rho: _area_factor(rho, n), e, c.r0, top, epsrel=CAP_MASS_RTOL
    )
    return c.coeff * sphere_area(n - 2) * val


def cap_mass(mu: SphereMeasure, r: float, include_atoms: bool = True) -> float:
    """Mass of the closed chordal ball ``B_r(x0)`` intersected with the sphere."""
    if not (0.0 < r <= 2.0):
        raise ValueError("chordal radius must lie in (0, 2]")
    x0 = np.asarray(mu.base_point)
    total = 0.0
    if include_atoms:
        for a in mu.atoms:
            if np.linalg.norm(np.asarray(a.zeta) - x0) <= r:
                total += a.mass
    for c in mu.density_caps():
        total += _cap_piece_mass(c, r, mu.n)
    return total


def cap_power_measure(alpha: float, b: float, n: int, r_max: float = 1.0, base_point=None) -> SphereMeasure:
    """Cap density ``coeff * rho^(-alpha)`` on ``rho < r_max`` with ``cap_mass(r) ~ b r^(n-1-alpha)``.

    The calibration ``coeff = b (n - 1 - alpha) / sigma_(n-2)`` makes the flat
    leading term exact; the area factor only enters at relative order ``r^2``.
    """
    _check_dimension(n)
    if not (-1.0 < alpha < n - 1):
        raise DomainError(f"cap power measure needs -1 < alpha < {n - 1}, got {alpha}")
    if not b > 0:
        raise ValueError("b must be positive")
    if base_point is None:
        base_point = (0.0,) * (n - 1) + (1.0,)
    coeff = b * (n - 1 - alpha) / sphere_area(n - 2)
    return SphereMeasure(n, tuple(base_point), caps=(Cap(coeff, -alpha, 0.0, r_max),))


def uniform_sphere_measure(n: int, density: float, base_point=None) -> SphereMeasure:
    if base_point is None:
        base_point = (0.0,) * (n - 1) + (1.0,)
    return SphereMeasure(n, tuple(base_point), patches=(CapPatch(0.0, 2.0, density),))


# --------------------------------------------------------------------------
# integration over the sphere (n = 3)


def _frame(x0: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # orthonormal e1, e2 completing x0 in R^3
    trial = np.eye(3)[int(np.argmin(np.abs(x0)))]
    e1 = _unit(trial - np.dot(trial, x0) * x0)
    return e1, np.cross(x0, e1)


def sphere_cubature(f, pole=(0.0, 0.0, 1.0), n_theta: int = 24, n_phi: int = 64, panels: int = 12) -> float:
    """Integral of ``f(zeta)`` over S^2 by a product rule.

    Gauss-Legendre in the polar angle about ``pole`` on panels graded
    geometrically toward the pole, and the trapezoid rule in azimuth (exact
    for trigonometric polynomials of degree below ``n_phi``).
    """
    x0 = _unit(pole)
    e1, e2 = _frame(x0)
    edges = [0.0] + [math.pi * 2.0 ** (k - panels) for k in range(panels + 1)]
    nodes, weights = np.polynomial.legendre.leggauss(n_theta)
    phis = 2.0 * math.pi * np.arange(n_phi) / n_phi
    ring = np.cos(phis)[:, None] * e1 + np.sin(phis)[:, None] * e2
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        thetas = 0.5 * (b - a) * nodes + 0.5 * (b + a)
        for th, w in zip(thetas, 0.5 * (b - a) * weights):
            pts = math.cos(th) * x0 + math.sin(th) * ring
            ring_sum = sum(f(p) for p in pts) * (2.0 * math.pi / n_phi)
            total += w * math.sin(th) * ring_sum
    return total


def _azimuthal_mean(A: float, B: float) -> float:
    """``(1/2pi) integral over phi of (A - B cos phi)^(-3/2)`` for ``A > B >= 0``."""
    if B == 0.0:
        return A**-1.5
    return 2.0 * special.ellipe(2.0 * B / (A + B)) / (math.pi * (A - B) * math.sqrt(A + B))


def ball_extend(mu: SphereMeasure, y) -> float:
    """``u(y) = integral of ball_kernel(zeta, y) dmu(zeta)``.

    Atoms are summed directly in any dimension.  Densities need ``n = 3``:
    the azimuth about ``x0`` is integrated in closed form (complete elliptic
    integral) and the chordal radius by adaptive quadrature, refined around
    the chordal radius of the point nearest to ``y``.
    """
    y = _as_point(y)
    n = mu.n
    if y.shape != (n,):
        raise ValueError(f"y must have {n} coordinates")
    total = 0.0
    for a in mu.atoms:
        total += a.mass * ball_kernel(a.zeta, y, n)
    caps = mu.density_caps()
    if not caps:
        return total
    if n != 3:
        raise DimensionError(f"density components need n = 3, got {n}")
    x0 = np.asarray(mu.base_point)
    y2 = float(np.dot(y, y))
    h = float(np.dot(y, x0))
    w = math.sqrt(max(0.0, y2 - h * h))
    depth = 1.0 - math.sqrt(y2)
    # chordal radius of y / |y| seen from x0
    rho_y = math.sqrt(max(0.0, 2.0 - 2.0 * h / math.sqrt(y2))) if y2 > 0 else math.sqrt(2.0)
    pts = [p for p in (rho_y, rho_y - depth, rho_y + depth, rho_y - 10 * depth, rho_y + 10 * depth, depth, 10 * depth) if 0 < p < 2]
    pref = (1.0 - y2) / sphere_area(2) * 2.0 * math.pi

    def g(rho):
        c = 1.0 - 0.5 * rho * rho
        s = rho * math.sqrt(max(0.0, 1.0 - 0.25 * rho * rho))
        A = 1.0 + y2 - 2.0 * h * c
        B = 2.0 * w * s
        return pref * _azimuthal_mean(A, B)

    for c in caps:
        val, _ = quadrature.integrate_power(g, c.q + 2.0, c.r0, c.r1, pts, epsrel=0.1 * EXTEND_RTOL)
        total += c.coeff * val
    return total


# --------------------------------------------------------------------------
# projection to the tangent plane


def chordal_to_projected(rho: float) -> float:
    """Distance from ``x0`` after orthogonal projection to the tangent plane."""
    return rho * math.sqrt(max(0.0, 1.0 - 0.25 * rho * rho))


def projected_to_chordal(p: float) -> float:
    # inverse of chordal_to_projected on the near hemisphere (rho < sqrt 2)
    if not (0.0 <= p <= 1.0):
        raise ValueError("projected radius must lie in [0, 1]")
    return math.sqrt(2.0 * p * p / (1.0 + math.sqrt(1.0 - p * p)))


def tangent_projection(s, x0) -> np.ndarray:
    """Orthogonal projection of ``s`` onto the tangent plane ``{p . x0 = 1}``."""
    s = np.asarray(s, dtype=float)
    x0 = np.asarray(x0, dtype=float)
    return s + (1.0 - float(np.dot(s, x0))) * x0


def project_pushforward(mu: SphereMeasure, epsilon: float) -> BoundaryMeasure:
    """Push ``mu`` restricted to the chordal ``epsilon``-cap to the tangent plane at ``x0``.

    Returns a half-space ``BoundaryMeasure`` whose origin is ``x0``: the cap
    densities become a tabulated radial cumulative on a log grid, atoms move
    to their projected positions.  Any mass outside the cap raises
    ``SupportError``.
    """
    if not (0.0 < epsilon < 1.0):
        raise ValueError("epsilon must lie in (0, 1)")
    n = mu.n
    x0 = np.asarray(mu.base_point)
    for c in mu.density_caps():
        if c.r1 > epsilon:
            raise SupportError(f"density reaches chordal radius {c.r1} beyond the cap {epsilon}")
    atoms = []
    if mu.atoms:
        # orthonormal basis of the tangent directions
        basis = np.linalg.svd(np.eye(n) - np.outer(x0, x0))[0][:, : n - 1]
        for a in mu.atoms:
            z = np.asarray(a.zeta)
            if np.linalg.norm(z - x0) > epsilon:
                raise SupportError("atom outside the cap")
            loc = basis.T @ (tangent_projection(z, x0) - x0)
            loc[np.abs(loc) < 1e-15] = 0.0
            atoms.append(Atom(tuple(loc), a.mass))
    radials = ()
    caps = mu.density_caps()
    if caps:
        top = chordal_to_projected(max(c.r1 for c in caps))
        grid = set(np.logspace(math.log10(top) - PUSHFORWARD_DECADES, math.log10(top), PUSHFORWARD_RADII))
        grid.update(chordal_to_projected(r) for c in caps for r in (c.r0, c.r1) if r > 0)
        radii = sorted(grid)
        values = [cap_mass(mu, projected_to_chordal(p), include_atoms=False) for p in radii]
        radials = (TabulatedRadial(tuple(radii), tuple(values)),)
    return BoundaryMeasure(n, atoms=tuple(atoms), radials=radials)


@dataclass
class DistanceRatios:
    ratios: np.ndarray
    max_tail_deviation: float
    details: dict = field(default_factory=dict)


def distance_ratio_probe(z_points: Sequence, s_points: Sequence, x0, aperture: float | None = None) -> DistanceRatios:
    """``|z - s| / |z - Pr(s)|`` for paired interior points ``z`` and boundary points ``s``.

    The tail is the second half of the pairs (the sequences are meant to
    approach ``x0``).
    """
    z = np.atleast_2d(np.asarray(z_points, dtype=float))
    s = np.atleast_2d(np.asarray(s_points, dtype=float))
    if z.shape != s.shape:
        raise ValueError("need one boundary point per interior point")
    x0 = _unit(x0)
    ratios = np.array(
        [np.linalg.norm(zi - si) / np.linalg.norm(zi - tangent_projection(si, x0)) for zi, si in zip(z, s)]
    )
    tail = ratios[len(ratios) // 2 :]
    return DistanceRatios(ratios, float(np.max(np.abs(tail - 1.0))), {"aperture": aperture})
