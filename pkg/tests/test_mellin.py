import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from posharm.halfspace import normal_trace_convolution, normal_trace_direct
from posharm.measures import BoundaryMeasure, RadialProfile, atom_measure, power_law_measure
from posharm.mellin import (
    L1_LOG,
    LogLineFunction,
    box,
    character,
    k_hat_closed,
    k_hat_numeric,
    kernel_function,
    kernel_k,
    log_convolve,
    moment,
    squeeze_check,
    squeeze_g,
    weak_limit_check,
)
from posharm.reports import log_grid, loglog_slope
from posharm.specfun import DomainError, tauberian_constant


def test_character_against_box():
    for t in (1e-3, 0.5, 7.0):
        assert log_convolve(character(0.0), box(1.0, math.e), t) == pytest.approx(1.0, rel=1e-12)


def test_box_is_closed_open():
    b = box(1.0, 2.0, 3.0)
    assert b(1.0) == 3.0 and b(2.0) == 0.0 and b(0.999) == 0.0
    assert b.compact and not character(1.0).compact


def test_log_line_validation():
    with pytest.raises(ValueError):
        LogLineFunction(math.exp, "L2")
    with pytest.raises(ValueError):
        LogLineFunction(math.exp, L1_LOG, support=(2.0, 1.0))
    with pytest.raises(ValueError):
        box(0.0, 1.0)
    with pytest.raises(DomainError):
        kernel_function(3, 4.0)


@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("t", [1e-3, 0.1, 1.0, 10.0])
def test_trace_is_kernel_convolved_with_profile(n, t):
    mu = atom_measure(n, 1.0) + power_law_measure(0.5, 2.0, n, 1.0)
    prof = RadialProfile.from_measure(mu)
    conv = log_convolve(kernel_function(n), prof, t)
    assert conv == pytest.approx(normal_trace_direct(mu, t), rel=1e-8)
    assert conv == pytest.approx(normal_trace_convolution(mu, t, prof), rel=1e-8)


@pytest.mark.parametrize("alpha", [-1.5, -0.5, 0.0, 0.5])
def test_eigen_identity(alpha):
    # k * t^alpha = k_hat(0, -alpha) t^alpha
    lam = k_hat_closed(0.0, -alpha, 3).real
    for t in (1e-2, 1.0, 30.0):
        assert log_convolve(kernel_function(3), character(alpha), t) == pytest.approx(lam * t**alpha, rel=1e-9)


@given(st.floats(1e-4, 1e4))
@settings(max_examples=30, deadline=None)
def test_young_bound(t):
    g = box(0.3, 2.0, -1.5)
    norm_k = moment(kernel_function(3), 0.0)
    assert abs(log_convolve(kernel_function(3), g, t)) <= norm_k * 1.5 * (1 + 1e-9)


@given(st.floats(1e-3, 1e3), st.floats(0.1, 0.9), st.floats(1.1, 5.0))
@settings(max_examples=30, deadline=None)
def test_commutative(t, lo, hi):
    f = box(lo, hi, 2.0)
    k = kernel_function(3)
    assert log_convolve(f, k, t) == pytest.approx(log_convolve(k, f, t), rel=1e-8, abs=1e-14)


def test_limit_transport():
    M = LogLineFunction(lambda t: 2.0 / (1.0 + t), "Linf_log", breakpoints=(1.0,))
    target = 2.0 * moment(kernel_function(3), 0.0)
    assert log_convolve(kernel_function(3), M, 1e-7) == pytest.approx(target, rel=1e-5)


def test_k_hat_examples():
    assert k_hat_closed(0.0, 0.0, 3) == pytest.approx(1 / math.pi, rel=1e-14)
    assert k_hat_closed(0.0, 0.5, 3).imag == 0.0
    for y in (0.3, 2.0, 9.5):
        assert abs(k_hat_closed(-y, 0.5, 4) - k_hat_closed(y, 0.5, 4).conjugate()) <= 1e-15
        assert k_hat_closed(y, 0.5, 4) != 0
    for n in range(2, 7):
        assert k_hat_closed(0.0, 0.3, n).real * tauberian_constant(0.3, n) == pytest.approx(1.0, rel=1e-13)


@pytest.mark.parametrize("alpha,n", [(-1.0, 3), (2.5, 3), (0.0, 1)])
def test_k_hat_domain(alpha, n):
    with pytest.raises(DomainError):
        k_hat_closed(1.0, alpha, n)
    with pytest.raises(DomainError):
        k_hat_numeric(1.0, alpha, n)


@given(st.floats(-15, 15), st.floats(-0.9, 1.9))
@settings(max_examples=25, deadline=None)
def test_k_hat_dual_route(y, alpha):
    assert abs(k_hat_numeric(y, alpha, 3) - k_hat_closed(y, alpha, 3)) <= 1e-8


def test_kernel_k_value_and_slopes():
    assert kernel_k(1.0, 3) == pytest.approx(3 / (2 * math.pi) / 2**2.5, rel=1e-15)
    small = np.logspace(-8, -6, 5)
    large = np.logspace(6, 8, 5)
    assert loglog_slope(small, [kernel_k(t, 3) for t in small]) == pytest.approx(1.0, abs=1e-9)
    assert loglog_slope(large, [kernel_k(t, 3) for t in large]) == pytest.approx(-4.0, abs=1e-9)
    assert kernel_k(1e200, 3) >= 0.0
    with pytest.raises(ValueError):
        kernel_k(0.0, 3)


def test_squeeze_g_examples():
    g = squeeze_g(0.5)
    assert g(1.2) == 2.0 and g(1.5) == 0.0 and g(0.9) == 0.0
    assert squeeze_g(0.5, "minus")(0.5) == 2.0
    for eps in (0.5, 0.1):
        assert moment(squeeze_g(eps), 0.0) == pytest.approx(math.log1p(eps) / eps, rel=1e-12)
        assert moment(squeeze_g(eps, "minus"), 0.0) == pytest.approx(-math.log1p(-eps) / eps, rel=1e-12)
    assert moment(squeeze_g(1e-4), 0.0) == pytest.approx(1.0, abs=1e-4)
    with pytest.raises(ValueError):
        squeeze_g(1.0)
    with pytest.raises(ValueError):
        squeeze_g(0.5, "both")


def test_squeeze_holds_for_measures():
    ts = log_grid(1e-1, 1e-3, 4)
    for mu in (atom_measure(3, 1.0), power_law_measure(0.5, 1.0, 3, 1.0) + atom_measure(3, 0.3, (0.02, 0.0))):
        for eps in (0.5, 0.1):
            assert all(r.ok for r in squeeze_check(RadialProfile.from_measure(mu), eps, ts, 3))


def test_squeeze_negative_control():
    # M(t) = t^-8 means a steeply decreasing cumulative mass
    rows = squeeze_check(lambda t: t**-8.0, 0.1, [0.1, 1.0], 3)
    assert not any(r.ok for r in rows)


def test_weak_limit_power_law():
    prof = RadialProfile.from_measure(power_law_measure(0.5, 1.0, 3, 1.0))
    rep = weak_limit_check(prof, squeeze_g(0.1), 0.5, log_grid(1e-2, 1e-5, 4), 3)
    assert rep.details["agrees"]
    assert rep.details["trace_limit"] * tauberian_constant(0.5, 3) == pytest.approx(1.0, rel=1e-3)


def test_weak_limit_zero_measure_and_domain():
    prof = RadialProfile.from_measure(BoundaryMeasure(3))
    rep = weak_limit_check(prof, box(1.0, 2.0), 0.0, log_grid(1e-1, 1e-3, 4), 3)
    assert rep.details["agrees"] and rep.details["predicted"] == 0.0
    with pytest.raises(DomainError):
        weak_limit_check(prof, box(1.0, 2.0), 2.0, [0.1], 3)
    with pytest.raises(DomainError):
        weak_limit_check(prof, character(0.0), 0.5, [0.1], 3)
