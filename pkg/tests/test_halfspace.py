import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from posharm.halfspace import (
    ApproachPath,
    HalfSpacePoint,
    extend,
    kernel_mass,
    lower_bound_check,
    normal_trace_convolution,
    normal_trace_direct,
    nt_values,
    poisson_kernel,
)
from posharm.measures import (
    BoundaryMeasure,
    DimensionError,
    atom_measure,
    lebesgue_measure,
    patch_measure,
    power_law_measure,
)
from posharm.reports import CONVERGED, DIVERGED, log_grid, loglog_slope
from posharm.specfun import kappa_n


def test_kernel_examples():
    assert poisson_kernel((0.0, 0.0), 1.0, 3) == pytest.approx(1 / (2 * math.pi), rel=1e-15)
    assert poisson_kernel((0.0,), 2.0, 2) == pytest.approx(1 / (2 * math.pi), rel=1e-15)
    assert poisson_kernel((1.0, 0.0), 1.0, 3) == pytest.approx(1 / (2 * math.pi * 2**1.5), rel=1e-15)
    with pytest.raises(ValueError):
        poisson_kernel((0.0, 0.0), 0.0, 3)


@given(st.floats(-5, 5), st.floats(-5, 5), st.floats(1e-3, 1e3))
def test_kernel_scaling(x1, x2, t):
    lhs = poisson_kernel((x1, x2), t, 3)
    rhs = t ** (-2) * poisson_kernel((x1 / t, x2 / t), 1.0, 3)
    assert lhs == pytest.approx(rhs, rel=1e-12)


@pytest.mark.parametrize("n", range(2, 7))
@pytest.mark.parametrize("t", [0.1, 1.0, 10.0])
def test_kernel_normalization(n, t):
    assert abs(kernel_mass(t, n) - 1.0) <= 1e-8


@pytest.mark.parametrize("n", [2, 3, 4])
def test_lebesgue_extends_to_one(n):
    mu = lebesgue_measure(n, 1.0)
    for x, t in [((0.0,) * (n - 1), 0.01), ((0.3,) * (n - 1), 1.0), ((-2.0,) + (0.5,) * (n - 2), 7.0)]:
        assert extend(mu, (x, t)) == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("n", [2, 3, 5])
def test_atom_extension_exact(n):
    loc = tuple(0.1 * (i + 1) for i in range(n - 1))
    mu = atom_measure(n, 2.0, loc)
    x = tuple(-0.2 for _ in range(n - 1))
    t = 0.3
    r2 = sum((a - b) ** 2 for a, b in zip(x, loc))
    assert extend(mu, HalfSpacePoint(x, t)) == pytest.approx(2.0 * kappa_n(n) * t / (r2 + t * t) ** (n / 2), rel=1e-14)


def test_zero_measure():
    assert normal_trace_direct(BoundaryMeasure(3), 0.1) == 0.0
    assert normal_trace_convolution(BoundaryMeasure(3), 0.1) == 0.0


@pytest.mark.parametrize("alpha", [-0.5, 0.0, 1.0, 1.9])
@pytest.mark.parametrize("t", [1e-4, 1e-2, 1.0, 30.0])
def test_direct_matches_convolution(alpha, t):
    mu = power_law_measure(alpha, 1.5, 3, 0.7) + atom_measure(3, 0.4, (0.1, 0.2))
    d = normal_trace_direct(mu, t)
    c = normal_trace_convolution(mu, t)
    assert abs(d - c) <= 1e-9 * d


def test_patch_against_dblquad():
    mu = patch_measure(3, (-0.3, 0.1), (0.5, 0.4), 1.7)
    for x, t in [((0.0, 0.0), 0.2), ((0.2, 0.3), 0.05), ((1.0, -1.0), 0.5)]:
        ref, _ = integrate.dblquad(
            lambda b, a: poisson_kernel((x[0] - a, x[1] - b), t, 3),
            -0.3,
            0.5,
            0.1,
            0.4,
            epsabs=1e-13,
            epsrel=1e-11,
        )
        assert extend(mu, (x, t)) == pytest.approx(1.7 * ref, rel=1e-8)


def test_lower_bound_examples():
    for mu in (atom_measure(3, 1.0), power_law_measure(0.5, 1.0, 3, 1.0), patch_measure(3, (-1, -1), (1, 1), 2.0)):
        for t in (1e-3, 0.1, 1.0):
            u, bound, ok = lower_bound_check(mu, t)
            assert ok and u >= bound > 0


def test_lower_bound_constant_for_atom():
    u, bound, _ = lower_bound_check(atom_measure(3, 1.0), 0.1)
    c = kappa_n(3) * (2**-1.5 - 5**-1.5)
    assert bound == pytest.approx(c / 0.01, rel=1e-14)


def test_nt_values_patch_and_atom():
    heights = tuple(log_grid(1e-1, 1e-4, 4))
    patch = patch_measure(3, (-1, -1), (1, 1), 2.0)
    rep = nt_values(patch, ApproachPath((0.0, 0.0), 1.0, (1.0, 0.0), heights))
    assert rep.status == CONVERGED and rep.extrapolated_limit == pytest.approx(2.0, rel=1e-3)
    rep = nt_values(atom_measure(3, 1.0), ApproachPath((0.0, 0.0), 2.0, (0.0, 1.0), heights))
    assert rep.status == DIVERGED
    assert rep.details["aperture"] == 2.0


def test_approach_path_validation():
    with pytest.raises(ValueError):
        ApproachPath((0.0, 0.0), -1.0, (1.0, 0.0), (0.1,))
    with pytest.raises(ValueError):
        ApproachPath((0.0, 0.0), 1.0, (1.0, 1.0), (0.1,))
    with pytest.raises(ValueError):
        ApproachPath((0.0, 0.0), 1.0, (1.0, 0.0), (0.1, 0.2))
    with pytest.raises(ValueError):
        HalfSpacePoint((0.0,), 0.0)


def _laplacian(f, x, t, h):
    x = np.asarray(x, dtype=float)
    lap = (f(x, t + h) - 2 * f(x, t) + f(x, t - h)) / h**2
    for i in range(len(x)):
        e = np.zeros(len(x))
        e[i] = h
        lap += (f(x + e, t) - 2 * f(x, t) + f(x - e, t)) / h**2
    return lap


def test_harmonic_by_finite_differences():
    mu = atom_measure(3, 1.0, (0.2, 0.0)) + patch_measure(3, (-0.5, -0.5), (0.0, 0.5), 1.0)
    f = lambda x, t: extend(mu, (tuple(x), t))
    for x, t in [((0.1, 0.1), 0.5), ((-0.3, 0.7), 0.8)]:
        u = f(np.asarray(x), t)
        assert abs(_laplacian(f, x, t, 1e-3)) <= 1e-4 * u / 1e-3**0


@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(1e-3, 10))
@settings(max_examples=40, deadline=None)
def test_positivity(x1, x2, t):
    mu = power_law_measure(0.5, 1.0, 3, 1.0) + atom_measure(3, 0.5, (1.0, -1.0)) + patch_measure(3, (0, 0), (1, 1), 0.2)
    assert extend(mu, ((x1, x2), t)) > 0


@pytest.mark.parametrize("alpha", [-0.5, 0.0, 1.0, 2.0])
def test_fitted_order(alpha):
    mu = atom_measure(3, 1.0) if alpha == 2.0 else power_law_measure(alpha, 1.0, 3, 1.0)
    ts = log_grid(1e-3, 1e-6, 2)
    u = np.array([normal_trace_direct(mu, t) for t in ts])
    slope = loglog_slope(ts, u)
    assert -2.0 - 1e-6 <= slope <= 1.0
    assert slope == pytest.approx(-alpha, abs=0.02)


def test_dimension_errors():
    mu = power_law_measure(0.0, 1.0, 5, 1.0)
    assert normal_trace_direct(mu, 0.1) > 0
    with pytest.raises(DimensionError):
        extend(mu, ((0.1, 0.0, 0.0, 0.0), 0.1))
    with pytest.raises(DimensionError):
        nt_values(mu, ApproachPath((0.0,) * 4, 1.0, (1.0, 0.0, 0.0, 0.0), (0.1, 0.01)))
    with pytest.raises(ValueError):
        extend(mu, ((0.0,), 0.1))
