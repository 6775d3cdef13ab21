"""Boundary measures on the hyperplane R^(n-1) and their local analysis.

A ``BoundaryMeasure`` is a finite sum of atoms, radial densities centred at
the origin O, and constant-density boxes ("patches").  Radial components are
stored as lists of *pieces*: on ``[lo, hi)`` the cumulative increment is
``dF = coeff * r**(e - 1) dr``, which covers both the power-law densities and
the tabulated cumulative used for projected sphere measures.
"""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy import special

from . import quadrature
from .reports import CONVERGED, DIVERGED, INCONCLUSIVE, ConvergenceReport, make_report
from .specfun import DomainError, ball_volume, sphere_area

__all__ = [
    "UnsupportedCenterError",
    "DimensionError",
    "Atom",
    "RadialPower",
    "TabulatedRadial",
    "Patch",
    "BoundaryMeasure",
    "PointSequence",
    "RadialProfile",
    "ball_mass",
    "power_law_measure",
    "atom_measure",
    "patch_measure",
    "lebesgue_measure",
    "m_profile",
    "dilate",
    "symmetric_derivative",
    "strong_derivative_probe",
    "beurling_sum",
    "separation_index",
]


class UnsupportedCenterError(ValueError):
    """Ball-mass query for a radial component away from the origin."""


class DimensionError(ValueError):
    """Operation not available in this boundary dimension."""


Piece = tuple  # (lo, hi, coeff, e)


def _piece_mass(piece: Piece, r: float) -> float:
    lo, hi, c, e = piece
    if r <= lo:
        return 0.0
    top = min(r, hi)
    if e == 0.0:
        return c * math.log(top / lo)
    return c * (top**e - lo**e) / e


@dataclass(frozen=True)
class Atom:
    location: tuple[float, ...]
    mass: float

    def __post_init__(self):
        object.__setattr__(self, "location", tuple(float(x) for x in self.location))
        if not self.mass > 0:
            raise ValueError(f"atom mass must be positive, got {self.mass}")


@dataclass(frozen=True)
class RadialPower:
    """Density ``coeff * |xi|**q`` (w.r.t. Lebesgue on R^(n-1)) on ``r0 <= |xi| < r1``."""

    coeff: float
    q: float
    r0: float = 0.0
    r1: float = math.inf

    def __post_init__(self):
        if not self.coeff > 0:
            raise ValueError(f"radial coefficient must be positive, got {self.coeff}")
        if not (0.0 <= self.r0 < self.r1):
            raise ValueError(f"need 0 <= r0 < r1, got {self.r0}, {self.r1}")
        if math.isinf(self.r1) and not self.q < 1.0:
            raise ValueError("unbounded radial density needs q < 1 for the Poisson integral to converge")

    def validate(self, n: int) -> None:
        if self.r0 == 0.0 and not self.q > -(n - 1):
            raise ValueError(f"density |xi|^{self.q} is not integrable at O in dimension {n - 1}")

    def pieces(self, n: int) -> list[Piece]:
        return [(self.r0, self.r1, self.coeff * sphere_area(n - 2), self.q + n - 1)]

    def cumulative(self, r: float, n: int) -> float:
        return _piece_mass(self.pieces(n)[0], r)

    def breakpoints(self) -> list[float]:
        return [x for x in (self.r0, self.r1) if 0.0 < x < math.inf]

    def dilate(self, r: float, n: int) -> "RadialPower":
        return RadialPower(self.coeff * r**self.q, self.q, self.r0 / r, self.r1 / r)

    @property
    def bounded(self) -> bool:
        return math.isfinite(self.r1)


@dataclass(frozen=True)
class TabulatedRadial:
    """Radial cumulative ``F(r) = mu(B_r(O))`` given on a grid of radii.

    Between grid points ``F`` is interpolated as a power law (linear where
    the left value is 0); below the first radius the first segment's power
    law is extended to 0; above the last radius ``F`` is constant.
    """

    radii: tuple[float, ...]
    values: tuple[float, ...]
    exponents: tuple[float, ...] = field(init=False, repr=False)
    head_exponent: float = field(init=False, repr=False)

    def __post_init__(self):
        radii = tuple(float(x) for x in self.radii)
        values = tuple(float(x) for x in self.values)
        object.__setattr__(self, "radii", radii)
        object.__setattr__(self, "values", values)
        if len(radii) < 2 or len(radii) != len(values):
            raise ValueError("need at least two (radius, value) pairs of equal length")
        if radii[0] <= 0 or any(b <= a for a, b in zip(radii, radii[1:])):
            raise ValueError("radii must be positive and strictly increasing")
        if values[0] < 0 or any(b < a for a, b in zip(values, values[1:])):
            raise ValueError("cumulative values must be nonnegative and nondecreasing")
        exps = []
        for (ra, fa), (rb, fb) in zip(zip(radii, values), zip(radii[1:], values[1:])):
            exps.append(math.log(fb / fa) / math.log(rb / ra) if fa > 0 else 1.0)
        object.__setattr__(self, "exponents", tuple(exps))
        head = exps[0] if values[0] > 0 and exps[0] > 0 else 1.0
        object.__setattr__(self, "head_exponent", head)

    def validate(self, n: int) -> None:
        pass

    def cumulative(self, r: float, n: int | None = None) -> float:
        radii, values = self.radii, self.values
        if r <= 0:
            return 0.0
        if r >= radii[-1]:
            return values[-1]
        if r < radii[0]:
            return values[0] * (r / radii[0]) ** self.head_exponent
        k = bisect.bisect_right(radii, r) - 1
        fa = values[k]
        if fa > 0:
            return fa * (r / radii[k]) ** self.exponents[k]
        slope = (values[k + 1] - fa) / (radii[k + 1] - radii[k])
        return fa + slope * (r - radii[k])

    def pieces(self, n: int | None = None) -> list[Piece]:
        out = []
        r0, f0 = self.radii[0], self.values[0]
        if f0 > 0:
            e = self.head_exponent
            out.append((0.0, r0, f0 * e * r0 ** (-e), e))
        for k, e in enumerate(self.exponents):
            ra, rb = self.radii[k], self.radii[k + 1]
            fa, fb = self.values[k], self.values[k + 1]
            if fb == fa:
                continue
            if fa > 0:
                out.append((ra, rb, fa * e * ra ** (-e), e))
            else:
                out.append((ra, rb, (fb - fa) / (rb - ra), 1.0))
        return out

    def breakpoints(self) -> list[float]:
        return list(self.radii)

    def dilate(self, r: float, n: int) -> "TabulatedRadial":
        scale = r ** (-(n - 1))
        return TabulatedRadial(
            tuple(x / r for x in self.radii), tuple(v * scale for v in self.values)
        )

    @property
    def bounded(self) -> bool:
        return True


@dataclass(frozen=True)
class Patch:
    """Constant density on the axis-aligned box ``[lo, hi]``."""

    lo: tuple[float, ...]
    hi: tuple[float, ...]
    density: float

    def __post_init__(self):
        lo = tuple(float(x) for x in self.lo)
        hi = tuple(float(x) for x in self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if len(lo) != len(hi) or any(b <= a for a, b in zip(lo, hi)):
            raise ValueError("patch needs lo < hi componentwise")
        if not all(math.isfinite(x) for x in lo + hi):
            raise ValueError("patch box must be bounded")
        if self.density < 0:
            raise ValueError("patch density must be nonnegative")

    def kink_radii(self) -> list[float]:
        """Radii where ``r -> |box ∩ B_r(O)|`` can fail to be smooth."""
        out = {abs(x) for x in self.lo + self.hi}
        for corner in np.array(np.meshgrid(*zip(self.lo, self.hi))).reshape(len(self.lo), -1).T:
            out.add(float(np.linalg.norm(corner)))
        return sorted(x for x in out if x > 0)


@dataclass(frozen=True)
class BoundaryMeasure:
    n: int
    atoms: tuple[Atom, ...] = ()
    radials: tuple = ()
    patches: tuple[Patch, ...] = ()

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise DomainError(f"dimension must be an integer >= 2, got {self.n}")
        object.__setattr__(self, "atoms", tuple(self.atoms))
        object.__setattr__(self, "radials", tuple(self.radials))
        object.__setattr__(self, "patches", tuple(self.patches))
        m = self.n - 1
        for a in self.atoms:
            if len(a.location) != m:
                raise ValueError(f"atom location must have {m} coordinates")
        for p in self.patches:
            if len(p.lo) != m:
                raise ValueError(f"patch box must have {m} coordinates")
        for rc in self.radials:
            rc.validate(self.n)

    @property
    def m(self) -> int:
        return self.n - 1

    @property
    def is_zero(self) -> bool:
        return not self.atoms and not self.radials and all(p.density == 0 for p in self.patches)

    def radial_pieces(self) -> list[Piece]:
        return [pc for rc in self.radials for pc in rc.pieces(self.n)]

    def atom_mass_at_origin(self) -> float:
        return sum(a.mass for a in self.atoms if not any(a.location))

    def __add__(self, other: "BoundaryMeasure") -> "BoundaryMeasure":
        if other.n != self.n:
            raise ValueError("cannot add measures of different dimension")
        return BoundaryMeasure(
            self.n,
            self.atoms + other.atoms,
            self.radials + other.radials,
            self.patches + other.patches,
        )


@dataclass(frozen=True)
class PointSequence:
    """Interior points ``(x, t)`` of R^n_+, stored as rows ``[x_1..x_{n-1}, t]``."""

    points: np.ndarray
    n: int
    base: tuple[float, ...] | None = None

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=float))
        if pts.shape[1] != self.n:
            raise ValueError(f"points must have {self.n} coordinates")
        if np.any(pts[:, -1] <= 0):
            raise ValueError("every point must lie strictly above the boundary")
        base = tuple(self.base) if self.base is not None else (0.0,) * (self.n - 1)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "base", base)

    def heights(self) -> np.ndarray:
        return self.points[:, -1]

    def distances_to_base(self) -> np.ndarray:
        offset = self.points.copy()
        offset[:, :-1] -= np.asarray(self.base)
        return np.linalg.norm(offset, axis=1)


class RadialProfile:
    """The cumulative ``r -> mu(B_r(O))`` and ``M(r) = mu(B_r(O)) / r^(n-1)``.

    Built from a measure (closed forms per component) or, for negative
    controls, from an arbitrary callable.
    """

    def __init__(self, n: int, cumulative, breakpoints: Iterable[float] = (), measure=None):
        self.n = n
        self.cumulative = cumulative
        self.breakpoints = sorted({float(b) for b in breakpoints if 0 < b < math.inf})
        self.measure = measure

    @classmethod
    def from_measure(cls, mu: "BoundaryMeasure") -> "RadialProfile":
        atom_r = sorted(math.hypot(*a.location) if a.location else 0.0 for a in mu.atoms)
        atom_m = [a.mass for a in sorted(mu.atoms, key=lambda a: math.hypot(*a.location))]
        atom_cum = np.cumsum([0.0] + atom_m).tolist()
        radials = mu.radials
        n = mu.n
        patches = [p for p in mu.patches if p.density]
        origin = (0.0,) * mu.m

        def cumulative(r: float) -> float:
            if r <= 0:
                return 0.0
            total = atom_cum[bisect.bisect_right(atom_r, r)]
            for rc in radials:
                total += rc.cumulative(r, n)
            for p in patches:
                total += p.density * _ball_box_volume(origin, r, p.lo, p.hi)
            return total

        bps = [r for r in atom_r if r > 0]
        for rc in radials:
            bps += rc.breakpoints()
        for p in patches:
            bps += p.kink_radii()
        return cls(n, cumulative, bps, measure=mu)

    def M(self, r: float) -> float:
        return self.cumulative(r) / r ** (self.n - 1)

    __call__ = M


# --------------------------------------------------------------------------
# constructors


def power_law_measure(alpha: float, b: float, n: int, R: float = 1.0) -> BoundaryMeasure:
    """Radial measure with ``mu(B(r)) = b r^(n-1-alpha)`` for ``r <= R``."""
    if not (-1.0 < alpha < n - 1):
        raise DomainError(f"power-law measure needs -1 < alpha < {n - 1}, got {alpha}")
    if not b > 0:
        raise ValueError("b must be positive")
    coeff = b * (n - 1 - alpha) / sphere_area(n - 2)
    return BoundaryMeasure(n, radials=(RadialPower(coeff, -alpha, 0.0, R),))


def atom_measure(n: int, mass: float, location: Sequence[float] | None = None) -> BoundaryMeasure:
    loc = tuple(location) if location is not None else (0.0,) * (n - 1)
    return BoundaryMeasure(n, atoms=(Atom(loc, mass),))


def patch_measure(n: int, lo: Sequence[float], hi: Sequence[float], density: float) -> BoundaryMeasure:
    return BoundaryMeasure(n, patches=(Patch(tuple(lo), tuple(hi), density),))


def lebesgue_measure(n: int, density: float = 1.0) -> BoundaryMeasure:
    """``density`` times Lebesgue measure on the whole hyperplane."""
    return BoundaryMeasure(n, radials=(RadialPower(density, 0.0, 0.0, math.inf),))


# --------------------------------------------------------------------------
# ball masses


def _interval_overlap(a0, a1, b0, b1) -> float:
    return max(0.0, min(a1, b1) - max(a0, b0))


def _half_disk_integral(r: float, y: float, a: float, b: float) -> float:
    """Integral over x in [a, b] of |{y' in [-s, s] : y' <= y}|, s = sqrt(r^2 - x^2)."""
    a, b = max(a, -r), min(b, r)
    if b <= a:
        return 0.0

    def S(x):
        # antiderivative of sqrt(r^2 - x^2)
        x = min(max(x, -r), r)
        return 0.5 * (x * math.sqrt(max(r * r - x * x, 0.0)) + r * r * math.asin(x / r))

    if y >= r:
        return 2.0 * (S(b) - S(a))
    if y <= -r:
        return 0.0
    w = math.sqrt(r * r - y * y)
    total = 0.0
    lo, hi = max(a, -w), min(b, w)
    if hi > lo:
        total += y * (hi - lo) + S(hi) - S(lo)
    if y > 0:
        for p, q in ((a, min(b, -w)), (max(a, w), b)):
            if q > p:
                total += 2.0 * (S(q) - S(p))
    return total


def disk_rectangle_area(center, r, lo, hi) -> float:
    """Exact area of the disk ``B_r(center)`` intersected with the box ``[lo, hi]``."""
    if r <= 0:
        return 0.0
    cx, cy = center
    x0, x1 = lo[0] - cx, hi[0] - cx
    y0, y1 = lo[1] - cy, hi[1] - cy
    area = _half_disk_integral(r, y1, x0, x1) - _half_disk_integral(r, y0, x0, x1)
    return max(area, 0.0)


def _ball_box_volume(center, r, lo, hi) -> float:
    m = len(lo)
    far = math.sqrt(sum(max(abs(a - c), abs(b - c)) ** 2 for a, b, c in zip(lo, hi, center)))
    if r >= far:
        return math.prod(b - a for a, b in zip(lo, hi))
    if m == 1:
        return _interval_overlap(center[0] - r, center[0] + r, lo[0], hi[0])
    if m == 2:
        return disk_rectangle_area(center, r, lo, hi)
    if m == 3:
        a = max(lo[0], center[0] - r)
        b = min(hi[0], center[0] + r)
        if b <= a:
            return 0.0

        def slab(x):
            rr = r * r - (x - center[0]) ** 2
            if rr <= 0:
                return 0.0
            return disk_rectangle_area(center[1:], math.sqrt(rr), lo[1:], hi[1:])

        pts = [center[0]] + [
            center[0] + s * math.sqrt(max(r * r - d * d, 0.0))
            for d in {abs(lo[1] - center[1]), abs(hi[1] - center[1]), abs(lo[2] - center[2]), abs(hi[2] - center[2])}
            for s in (-1, 1)
        ]
        val, _ = quadrature.integrate_segments(slab, a, b, pts, epsabs=1e-15, epsrel=1e-12)
        return val
    raise DimensionError(f"patch cubature is limited to boundary dimension <= 3, got {m}")


def _sphere_fraction_in_ball(r: float, d: float, rho: float, m: int) -> float:
    """Fraction of the sphere |xi| = r in R^m lying inside a ball of radius rho at distance d."""
    if r + d <= rho:
        return 1.0
    if r >= d + rho or r <= d - rho:
        return 0.0
    h = (r * r + d * d - rho * rho) / (2.0 * d * r)
    h = min(1.0, max(-1.0, h))
    if m == 1:
        return 0.5 * ((abs(r - d) <= rho) + (r + d <= rho))
    return float(special.betainc(0.5 * (m - 1), 0.5 * (m - 1), 0.5 * (1.0 - h)))


def _radial_mass_off_center(pieces, m, d, rho) -> float:
    total = 0.0
    for lo, hi, c, e in pieces:
        a = max(lo, d - rho, 0.0)
        b = min(hi, d + rho)
        if b <= a:
            continue
        full = min(b, rho - d)
        if full > a:
            total += _piece_mass((lo, hi, c, e), full) - _piece_mass((lo, hi, c, e), a)
            a = full
        if b <= a:
            continue
        val, _ = quadrature.integrate_segments(
            lambda r: c * r ** (e - 1.0) * _sphere_fraction_in_ball(r, d, rho, m),
            a,
            b,
            epsabs=1e-15,
            epsrel=1e-12,
        )
        total += val
    return total


def ball_mass(
    mu: BoundaryMeasure,
    center: Sequence[float] | None,
    r: float,
    *,
    allow_offcenter_radials: bool = False,
) -> float:
    """``mu`` of the closed ball ``B_r(center)`` in the boundary hyperplane.

    Radial components are only evaluated in closed form at ``center = O``;
    other centres raise ``UnsupportedCenterError`` unless
    ``allow_offcenter_radials`` requests the (quadrature) spherical-cap path.
    """
    if not r > 0:
        raise ValueError("radius must be positive")
    m = mu.m
    c = np.zeros(m) if center is None else np.asarray(center, dtype=float)
    if c.shape != (m,):
        raise ValueError(f"center must have {m} coordinates")
    at_origin = not np.any(c)

    total = 0.0
    for a in mu.atoms:
        if math.dist(a.location, c) <= r:
            total += a.mass
    if mu.radials:
        if at_origin:
            total += sum(rc.cumulative(r, mu.n) for rc in mu.radials)
        elif allow_offcenter_radials:
            total += _radial_mass_off_center(mu.radial_pieces(), m, float(np.linalg.norm(c)), r)
        else:
            raise UnsupportedCenterError("radial components only support balls centred at O")
    for p in mu.patches:
        if p.density:
            total += p.density * _ball_box_volume(tuple(c), r, p.lo, p.hi)
    return total


def m_profile(mu: BoundaryMeasure, r: float) -> float:
    """Normalized profile ``M(r) = mu(B_r(O)) / r^(n-1)``."""
    return ball_mass(mu, None, r) / r ** (mu.n - 1)


def dilate(mu: BoundaryMeasure, r: float) -> BoundaryMeasure:
    """Rescaled measure ``mu_r(E) = mu(rE) r^(1-n)``."""
    if not r > 0:
        raise ValueError("dilation factor must be positive")
    n = mu.n
    scale = r ** (-(n - 1))
    return BoundaryMeasure(
        n,
        atoms=tuple(Atom(tuple(x / r for x in a.location), a.mass * scale) for a in mu.atoms),
        radials=tuple(rc.dilate(r, n) for rc in mu.radials),
        patches=tuple(
            Patch(tuple(x / r for x in p.lo), tuple(x / r for x in p.hi), p.density) for p in mu.patches
        ),
    )


# --------------------------------------------------------------------------
# derivatives


def _check_grid(grid, minimum=8) -> np.ndarray:
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or len(grid) < minimum:
        raise ValueError(f"need a grid of at least {minimum} radii")
    if np.any(grid <= 0) or np.any(np.diff(grid) >= 0):
        raise ValueError("grid must be positive and strictly decreasing")
    return grid


def symmetric_derivative(mu: BoundaryMeasure, t_grid, tol_limit: float = 1e-3) -> ConvergenceReport:
    """Trace of ``mu(B_r(O)) / (omega_{n-1} r^(n-1))`` as ``r`` decreases."""
    grid = _check_grid(t_grid)
    omega = ball_volume(mu.m)
    values = [ball_mass(mu, None, r) / (omega * r**mu.m) for r in grid]
    return make_report(grid, values, tol_limit=tol_limit)


def _default_directions(m: int) -> list[np.ndarray]:
    out = []
    for i in range(m):
        for s in (1.0, -1.0):
            e = np.zeros(m)
            e[i] = s
            out.append(e)
    return out


def strong_derivative_probe(
    mu: BoundaryMeasure,
    K_values: Iterable[float] = (1.0, 2.0, 5.0),
    directions: Iterable[Sequence[float]] | None = None,
    scales=None,
    tol_limit: float = 1e-3,
    tol_agree: float = 1e-2,
) -> ConvergenceReport:
    """Probe the strong derivative at O with finitely many regular ball families.

    For every direction ``e``, ``K`` and scale ``delta`` the ratios
    ``mu(B)/S(B)`` are taken for ``B = B_{K delta}(delta e)`` and
    ``B = B_{delta/K}(delta e)``.  The derivative is reported only if every
    branch converges and all limits agree to ``tol_agree``; the finite choice
    of ``K`` and directions stands in for "every regular sequence".
    """
    m = mu.m
    K_values = [float(k) for k in K_values]
    if any(k < 1 for k in K_values):
        raise ValueError("K must be >= 1")
    dirs = [np.asarray(d, dtype=float) for d in directions] if directions is not None else _default_directions(m)
    for d in dirs:
        if d.shape != (m,) or abs(np.linalg.norm(d) - 1.0) > 1e-12:
            raise ValueError("directions must be unit vectors in the boundary")
    grid = _check_grid(scales if scales is not None else np.logspace(-1, -5, 17))
    omega = ball_volume(m)

    branches = {}
    for i, d in enumerate(dirs):
        for K in K_values:
            for kind, factor in (("big", K), ("small", 1.0 / K)):
                vals = []
                for delta in grid:
                    rho = factor * delta
                    mass = ball_mass(mu, delta * d, rho, allow_offcenter_radials=True)
                    vals.append(mass / (omega * rho**m))
                branches[f"dir{i}:K={K:g}:{kind}"] = make_report(grid, vals, tol_limit=tol_limit)

    limits = [b.extrapolated_limit for b in branches.values() if b.converged]
    all_conv = len(limits) == len(branches)
    agree = all_conv and _agree(limits, tol_agree)
    if agree:
        status, limit = CONVERGED, float(np.mean(limits))
        diag = f"{len(branches)} branches agree on {limit:.6g}"
    elif any(b.status == DIVERGED for b in branches.values()):
        status, limit, diag = DIVERGED, None, "no strong derivative: some branch diverges"
    else:
        status, limit = INCONCLUSIVE, None
        diag = "no strong derivative: branch limits disagree" if all_conv else "no strong derivative: unresolved branches"
    mean_trace = np.mean([b.values for b in branches.values()], axis=0)
    return ConvergenceReport(
        samples=list(zip(grid.tolist(), mean_trace.tolist())),
        extrapolated_limit=limit,
        fitted_order=math.nan,
        status=status,
        diagnostics=diag,
        details={
            "strong_derivative": agree,
            "branch_status": {k: b.status for k, b in branches.items()},
            "branch_limits": {k: b.extrapolated_limit for k, b in branches.items()},
            "K_values": K_values,
        },
    )


def _agree(values, tol) -> bool:
    values = np.asarray(values, dtype=float)
    scale = np.max(np.abs(values))
    if scale == 0:
        return True
    return (np.max(values) - np.min(values)) <= tol * scale


# --------------------------------------------------------------------------
# Beurling sequences

BEURLING_RHO_MAX = 0.9
BEURLING_RESIDUAL = 0.1
BEURLING_SUM_CAP = 1e3
BEURLING_TERM_FLOOR = 1e-3
BEURLING_MIN_POINTS = 4


def beurling_terms(seq: PointSequence) -> np.ndarray:
    """Terms ``(d(z_i, boundary) / d(z_i, O))^n``."""
    return (seq.heights() / seq.distances_to_base()) ** seq.n


def beurling_sum(seq: PointSequence) -> tuple[list[float], str]:
    """Partial sums of the Beurling series and a converges/diverges verdict.

    A finite sample cannot decide divergence, so the verdict is a declared
    heuristic: "converges" if the last half of the terms fits ``c rho^i``
    with ``rho <= 0.9`` and every term within 10% of the fit; "diverges" if
    the partial sums pass 1e3 or the last half of the terms stays above 1e-3;
    otherwise "inconclusive".
    """
    terms = beurling_terms(seq)
    partial = np.cumsum(terms).tolist()
    if len(terms) < BEURLING_MIN_POINTS:
        return partial, "inconclusive"
    tail = terms[len(terms) // 2 :]
    idx = np.arange(len(terms))[len(terms) // 2 :]
    if np.all(tail > 0):
        slope, intercept = np.polyfit(idx, np.log(tail), 1)
        fit = np.exp(intercept + slope * idx)
        residual = float(np.max(np.abs(tail / fit - 1.0)))
        if math.exp(slope) <= BEURLING_RHO_MAX and residual <= BEURLING_RESIDUAL:
            return partial, "converges"
    if partial[-1] > BEURLING_SUM_CAP or np.min(tail) >= BEURLING_TERM_FLOOR:
        return partial, "diverges"
    return partial, "inconclusive"


def separation_index(seq: PointSequence) -> float:
    """``min over i != j of |z_i - z_j| / d(z_i, boundary)`` (exact, all ordered pairs)."""
    pts = seq.points
    if len(pts) < 2:
        raise ValueError("separation needs at least two points")
    diff = pts[:, None, :] - pts[None, :, :]
    dist = np.linalg.norm(diff, axis=-1)
    ratio = dist / pts[:, -1][:, None]
    np.fill_diagonal(ratio, np.inf)
    return float(np.min(ratio))
