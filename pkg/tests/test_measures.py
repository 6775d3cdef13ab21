import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from posharm.measures import (
    Atom,
    BoundaryMeasure,
    DimensionError,
    Patch,
    PointSequence,
    RadialPower,
    RadialProfile,
    TabulatedRadial,
    UnsupportedCenterError,
    atom_measure,
    ball_mass,
    beurling_sum,
    dilate,
    disk_rectangle_area,
    lebesgue_measure,
    m_profile,
    patch_measure,
    power_law_measure,
    separation_index,
    strong_derivative_probe,
    symmetric_derivative,
)
from posharm.reports import DIVERGED, log_grid
from posharm.specfun import DomainError, ball_volume


def test_ball_mass_examples():
    assert ball_mass(atom_measure(3, 1.0), None, 0.5) == 1.0
    assert ball_mass(power_law_measure(0.0, 1.0, 3, 1.0), None, 0.25) == pytest.approx(0.0625, rel=1e-15)
    assert ball_mass(atom_measure(3, 2.0, (0.3, 0.0)), None, 0.2) == 0.0


def test_closed_ball_includes_boundary_atom():
    assert ball_mass(atom_measure(3, 2.0, (0.3, 0.0)), None, 0.3) == 2.0


def test_power_law_constructor_fields():
    mu = power_law_measure(0.0, 1.0, 3, 1.0)
    (rc,) = mu.radials
    assert rc.coeff == pytest.approx(1 / math.pi, rel=1e-15)
    assert (rc.q, rc.r0, rc.r1) == (0.0, 0.0, 1.0)
    for n in range(3, 7):
        mu = power_law_measure(n - 2, 1.0, n, 1.0)
        for r in (0.01, 0.3, 1.0):
            assert ball_mass(mu, None, r) == pytest.approx(r, rel=1e-13)


@pytest.mark.parametrize("alpha", [-1.0, 2.0, 2.5])
def test_power_law_domain(alpha):
    with pytest.raises(DomainError):
        power_law_measure(alpha, 1.0, 3)


@given(
    st.floats(-0.95, 1.95),
    st.floats(0.1, 10.0),
    st.floats(0.1, 5.0),
    st.floats(1e-6, 1.0),
)
def test_power_law_exactness(alpha, b, R, frac):
    r = frac * R
    mu = power_law_measure(alpha, b, 3, R)
    assert abs(m_profile(mu, r) * r**alpha / b - 1.0) <= 1e-13


def test_m_profile_examples():
    assert m_profile(atom_measure(4, 2.0), 0.1) == pytest.approx(2.0 / 0.1**3, rel=1e-15)
    assert m_profile(BoundaryMeasure(3), 0.1) == 0.0


def test_radial_invariants():
    with pytest.raises(ValueError):
        RadialPower(1.0, -2.5).validate(3)
    with pytest.raises(ValueError):
        RadialPower(1.0, 1.0, 0.0, math.inf)
    with pytest.raises(ValueError):
        Atom((0.0, 0.0), 0.0)


def _mixture():
    return (
        power_law_measure(0.5, 1.0, 3, 1.0)
        + atom_measure(3, 0.7, (0.2, -0.1))
        + patch_measure(3, (-0.4, 0.1), (0.3, 0.6), 1.3)
        + BoundaryMeasure(3, radials=(RadialPower(0.8, 0.3, 0.2, 2.0),))
    )


@given(st.floats(1e-4, 3.0), st.floats(1e-4, 3.0))
def test_monotonicity(t1, t2):
    t1, t2 = sorted((t1, t2))
    prof = RadialProfile.from_measure(_mixture())
    lo, hi = prof.M(t1) * t1**2, prof.M(t2) * t2**2
    assert lo <= hi * (1 + 1e-12)


@given(st.floats(0.01, 100.0), st.floats(1e-3, 10.0))
@settings(max_examples=60)
def test_dilation_consistency(r, rho):
    mu = _mixture()
    lhs = ball_mass(dilate(mu, r), None, rho)
    rhs = r ** (-2) * ball_mass(mu, None, r * rho)
    assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-300)


def test_dilation_fields():
    mu = lebesgue_measure(3, 2.0)
    assert dilate(mu, 7.0) == mu
    a = dilate(atom_measure(3, 1.0), 0.5)
    assert a.atoms[0].location == (0.0, 0.0) and a.atoms[0].mass == pytest.approx(4.0)
    mu = _mixture()
    assert dilate(dilate(mu, 0.5), 4.0) == dilate(mu, 2.0)


def test_additivity_exact():
    parts = [power_law_measure(0.5, 1.0, 3, 1.0), atom_measure(3, 0.7, (0.2, -0.1)), patch_measure(3, (-0.4, 0.1), (0.3, 0.6), 1.3)]
    total = parts[0] + parts[1] + parts[2]
    for r in (0.05, 0.25, 0.5, 2.0):
        assert ball_mass(total, None, r) == sum(ball_mass(p, None, r) for p in parts)


def test_disk_rectangle_area_against_quadrature():
    rng = np.random.default_rng(3)
    for _ in range(20):
        c = rng.uniform(-1, 1, 2)
        r = rng.uniform(0.1, 1.5)
        lo = rng.uniform(-1, 0, 2)
        hi = lo + rng.uniform(0.1, 1.5, 2)
        ref, _ = integrate.quad(
            lambda x: max(0.0, min(hi[1], c[1] + math.sqrt(max(r * r - (x - c[0]) ** 2, 0))) - max(lo[1], c[1] - math.sqrt(max(r * r - (x - c[0]) ** 2, 0))))
            if abs(x - c[0]) < r
            else 0.0,
            lo[0],
            hi[0],
            points=_kinks(c, r, lo, hi),
            epsabs=1e-13,
            limit=200,
        )
        assert disk_rectangle_area(c, r, lo, hi) == pytest.approx(ref, abs=1e-10)


def _kinks(c, r, lo, hi):
    pts = [c[0] - r, c[0] + r]
    for yb in (lo[1], hi[1]):
        d = yb - c[1]
        if abs(d) < r:
            w = math.sqrt(r * r - d * d)
            pts += [c[0] - w, c[0] + w]
    return [p for p in pts if lo[0] < p < hi[0]]


def test_patch_ball_mass_dimension_four_and_limit():
    mu = patch_measure(4, (-1, -1, -1), (1, 1, 1), 1.0)
    assert ball_mass(mu, None, 0.5) == pytest.approx(4 / 3 * math.pi * 0.125, rel=1e-10)
    big = patch_measure(5, (-1,) * 4, (1,) * 4, 1.0)
    with pytest.raises(DimensionError):
        ball_mass(big, None, 0.5)


def test_offcenter_radial_rejected_unless_allowed():
    mu = power_law_measure(0.0, 1.0, 3, 1.0)
    with pytest.raises(UnsupportedCenterError):
        ball_mass(mu, (0.1, 0.0), 0.05)
    # density 1/pi on the unit disk: a small ball inside it has mass r^2 / pi * pi
    assert ball_mass(mu, (0.1, 0.0), 0.05, allow_offcenter_radials=True) == pytest.approx(0.05**2, rel=1e-10)


def test_symmetric_derivative_examples():
    grid = log_grid(1e-1, 1e-4, 4)
    rep = symmetric_derivative(patch_measure(3, (-1, -1), (1, 1), 1.0), grid)
    assert rep.converged and rep.extrapolated_limit == pytest.approx(1.0, rel=1e-12)
    b = 3.0
    rep = symmetric_derivative(power_law_measure(0.0, b, 3, 1.0), grid)
    assert rep.extrapolated_limit == pytest.approx(b / ball_volume(2), rel=1e-12)
    assert symmetric_derivative(atom_measure(3, 1.0), grid).status == DIVERGED
    with pytest.raises(ValueError):
        symmetric_derivative(atom_measure(3, 1.0), grid[:5])


def test_symmetric_derivative_smooth_density_patch_family():
    grid = log_grid(1e-1, 1e-4, 4)
    for density in (0.3, 1.0, 7.0):
        rep = symmetric_derivative(patch_measure(3, (-0.5, -0.2), (0.3, 0.9), density), grid)
        assert abs(rep.values[-1] / density - 1) <= 0.01


def test_strong_derivative_examples():
    b = 2.0
    rep = strong_derivative_probe(patch_measure(3, (-1, -1), (1, 1), b))
    assert rep.details["strong_derivative"] and rep.extrapolated_limit == pytest.approx(b, rel=1e-10)
    rep = strong_derivative_probe(atom_measure(3, 1.0), K_values=(2.0,), directions=[(1.0, 0.0)])
    assert not rep.details["strong_derivative"]
    assert rep.details["branch_status"]["dir0:K=2:big"] == DIVERGED
    assert rep.details["branch_limits"]["dir0:K=2:small"] == 0.0
    rep = strong_derivative_probe(power_law_measure(0.5, 1.0, 3, 1.0))
    assert not rep.details["strong_derivative"] and rep.status == DIVERGED


def test_strong_derivative_validation():
    with pytest.raises(ValueError):
        strong_derivative_probe(atom_measure(3, 1.0), K_values=(0.5,))
    with pytest.raises(ValueError):
        strong_derivative_probe(atom_measure(3, 1.0), directions=[(1.0, 1.0)])


def test_beurling_examples():
    normal = PointSequence(np.array([[0.0, 0.0, 2.0**-i] for i in range(1, 41)]), 3)
    partial, label = beurling_sum(normal)
    assert label == "diverges" and partial[-1] == 40.0
    tangential = PointSequence(np.array([[2.0**-i, 0.0, 4.0**-i] for i in range(1, 21)]), 3)
    partial, label = beurling_sum(tangential)
    assert label == "converges"
    _, label = beurling_sum(PointSequence(np.array([[0.0, 0.0, 0.5]]), 3))
    assert label == "inconclusive"


def test_separation_examples():
    normal = PointSequence(np.array([[0.0, 0.0, 2.0**-i] for i in range(1, 41)]), 3)
    assert separation_index(normal) == 0.5
    dup = PointSequence(np.array([[0.0, 0.0, 0.5], [0.0, 0.0, 0.5]]), 3)
    assert separation_index(dup) == 0.0
    two = PointSequence(np.array([[0.0, 1.0], [0.0, 2.0]]), 2)
    assert separation_index(two) == 0.5
    with pytest.raises(ValueError):
        separation_index(PointSequence(np.array([[0.0, 1.0]]), 2))


def test_point_sequence_validation():
    with pytest.raises(ValueError):
        PointSequence(np.array([[0.0, 0.0, -1.0]]), 3)
    with pytest.raises(ValueError):
        PointSequence(np.array([[0.0, 1.0]]), 3)


def test_tabulated_radial_reproduces_power_law():
    radii = np.logspace(-3, 0, 30)
    tab = TabulatedRadial(tuple(radii), tuple(2.0 * radii**1.5))
    for r in (1e-5, 2e-3, 0.37, 1.0, 5.0):
        assert tab.cumulative(r) == pytest.approx(2.0 * min(r, 1.0) ** 1.5, rel=1e-12)
    total = sum(_piece(p, 0.5) for p in tab.pieces())
    assert total == pytest.approx(2.0 * 0.5**1.5, rel=1e-12)
    with pytest.raises(ValueError):
        TabulatedRadial((1.0, 0.5), (1.0, 2.0))
    with pytest.raises(ValueError):
        TabulatedRadial((0.5, 1.0), (2.0, 1.0))


def _piece(piece, r):
    lo, hi, c, e = piece
    top = min(r, hi)
    return c * (top**e - lo**e) / e if top > lo else 0.0


def test_patch_validation():
    with pytest.raises(ValueError):
        Patch((0.0, 0.0), (1.0, -1.0), 1.0)
    with pytest.raises(ValueError):
        BoundaryMeasure(3, atoms=(Atom((0.0,), 1.0),))
