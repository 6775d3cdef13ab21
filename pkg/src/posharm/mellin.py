"""Convolution on the multiplicative group (0, inf) and the trace kernel k.

``(f * g)(t) = integral over s > 0 of f(t/s) g(s) dln s``.  The normal trace
of a Poisson extension is ``u(0, t) = (k * M)(t)`` with
``k(t) = n c t / (1 + t^2)^(n/2 + 1)`` and ``M`` the normalized profile.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, NamedTuple, Sequence

import numpy as np

from . import quadrature
from .measures import RadialProfile
from .reports import ConvergenceReport, make_report
from .specfun import DomainError, _check_dimension, kappa_n, log_gamma, tauberian_constant

__all__ = [
    "L1_LOG",
    "LINF_LOG",
    "L1_LOG_WEIGHTED",
    "LogLineFunction",
    "character",
    "box",
    "kernel_function",
    "profile_function",
    "log_convolve",
    "kernel_k",
    "k_hat_closed",
    "k_hat_numeric",
    "squeeze_g",
    "moment",
    "SqueezeRow",
    "squeeze_check",
    "weak_limit_check",
]

L1_LOG = "L1_log"
LINF_LOG = "Linf_log"
L1_LOG_WEIGHTED = "L1_log_weighted"
_TAGS = (L1_LOG, LINF_LOG, L1_LOG_WEIGHTED)

CONVOLVE_RTOL = 1e-9
K_HAT_RTOL = 1e-9
SQUEEZE_SLACK = 1e-9
WEAK_LIMIT_TOL = 1e-2

# beyond this log-distance from an endpoint the Beta integrand is replaced by
# its leading exponential, whose next correction is e^(-u) times smaller
_K_HAT_SPLIT_U = 40.0


@dataclass(frozen=True)
class LogLineFunction:
    """A real function on (0, inf) with a declared integrability class.

    ``tag`` is one of ``L1_log`` (integral of |f| dln t finite), ``Linf_log``
    (|f| t^(-alpha) bounded, ``alpha`` defaulting to 0) or ``L1_log_weighted``
    (integral of |f| t^(-alpha) dln t finite).  ``support`` bounds the set
    where ``f`` may be nonzero and ``breakpoints`` lists kinks and jumps; both
    only guide the quadrature.
    """

    func: Callable[[float], float]
    tag: str
    alpha: float = 0.0
    support: tuple[float, float] = (0.0, math.inf)
    breakpoints: tuple[float, ...] = field(default=())

    def __post_init__(self):
        if self.tag not in _TAGS:
            raise ValueError(f"unknown integrability tag {self.tag!r}")
        lo, hi = self.support
        if not (0.0 <= lo < hi):
            raise ValueError("support must be an interval inside [0, inf]")
        object.__setattr__(self, "breakpoints", tuple(sorted(float(b) for b in self.breakpoints if b > 0)))

    def __call__(self, t: float) -> float:
        lo, hi = self.support
        if t < lo or t >= hi:
            return 0.0
        return self.func(t)

    @property
    def compact(self) -> bool:
        lo, hi = self.support
        return lo > 0 and math.isfinite(hi)


def character(alpha: float) -> LogLineFunction:
    """``F_alpha(t) = t^alpha``."""
    return LogLineFunction(lambda t: t**alpha, LINF_LOG, alpha=alpha)


def box(lo: float, hi: float, height: float = 1.0) -> LogLineFunction:
    """``height`` times the indicator of the closed-open interval ``[lo, hi)``."""
    if not (0.0 < lo < hi < math.inf):
        raise ValueError("box needs 0 < lo < hi < inf")
    return LogLineFunction(lambda t: height, L1_LOG, support=(lo, hi), breakpoints=(lo, hi))


def kernel_function(n: int, alpha: float = 0.0) -> LogLineFunction:
    """``k`` as a log-line function, tagged integrable against ``t^alpha``."""
    _check_dimension(n)
    if not (-1.0 < alpha < n + 1):
        raise DomainError(f"k t^alpha is integrable in dln t only for -1 < alpha < {n + 1}")
    return LogLineFunction(lambda t: kernel_k(t, n), L1_LOG_WEIGHTED, alpha=-alpha, breakpoints=(1.0,))


def profile_function(profile: RadialProfile, alpha: float = 0.0) -> LogLineFunction:
    """The profile ``M`` as a log-line function (``M(t) t^alpha`` assumed bounded, not checked)."""
    return LogLineFunction(profile.M, LINF_LOG, alpha=-alpha, breakpoints=tuple(profile.breakpoints))


def _as_log_line(f) -> LogLineFunction:
    if isinstance(f, LogLineFunction):
        return f
    if isinstance(f, RadialProfile):
        return profile_function(f)
    return LogLineFunction(f, LINF_LOG)


def log_convolve(f, g, t: float, rtol: float = CONVOLVE_RTOL) -> float:
    """``(f * g)(t)`` by adaptive quadrature in ``u = ln s``."""
    if not t > 0:
        raise ValueError("t must be positive")
    f = _as_log_line(f)
    g = _as_log_line(g)
    # s ranges over supp g intersected with t / supp f
    flo, fhi = f.support
    s_lo = max(g.support[0], t / fhi if math.isfinite(fhi) else 0.0)
    s_hi = min(g.support[1], t / flo if flo > 0 else math.inf)
    if s_hi <= s_lo:
        return 0.0
    a = math.log(s_lo) if s_lo > 0 else -math.inf
    b = math.log(s_hi) if math.isfinite(s_hi) else math.inf
    pts = [math.log(p) for p in g.breakpoints] + [math.log(t / p) for p in f.breakpoints]

    def integrand(u):
        try:
            s = math.exp(u)
            r = t / s
            if r == 0.0 or not math.isfinite(r):
                return 0.0
            fv = f(r)
            if fv == 0.0:
                return 0.0
            return fv * g(s)
        except (OverflowError, ZeroDivisionError):
            # only reached at |u| of several hundred, deep in a decaying tail
            return 0.0

    val, _ = quadrature.integrate_segments(integrand, a, b, pts, epsrel=rtol)
    return val


def moment(g, p: float) -> float:
    """``integral of g(t) t^p dln t``."""
    g = _as_log_line(g)
    lo, hi = g.support
    a = math.log(lo) if lo > 0 else -math.inf
    b = math.log(hi) if math.isfinite(hi) else math.inf
    def integrand(u):
        try:
            s = math.exp(u)
            if s == 0.0:
                return 0.0
            return g(s) * math.exp(p * u)
        except OverflowError:
            # only an integrable tail can be sampled this far out
            return 0.0

    val, _ = quadrature.integrate_segments(integrand, a, b, [math.log(x) for x in g.breakpoints])
    return val


# --------------------------------------------------------------------------
# the trace kernel and its transform


def kernel_k(t: float, n: int) -> float:
    """``k(t) = n c t / (1 + t^2)^(n/2 + 1)`` with ``c = kappa_n``."""
    if not t > 0:
        raise ValueError("t must be positive")
    nc = n * kappa_n(n)
    if t > 1.0:
        return nc * t ** (-n - 1) * (1.0 + 1.0 / (t * t)) ** (-0.5 * n - 1.0)
    return nc * t / (1.0 + t * t) ** (0.5 * n + 1.0)


def _check_alpha(alpha: float, n: int) -> None:
    _check_dimension(n)
    if not (-1.0 < alpha <= n - 1):
        raise DomainError(f"alpha must lie in (-1, {n - 1}], got {alpha}")


def k_hat_closed(y: float, alpha: float, n: int) -> complex:
    """``integral of k(t) t^(alpha - i y) dln t`` in closed form.

    Equals ``Gamma((n - alpha + 1 + i y)/2) Gamma((alpha + 1 - i y)/2) / pi^(n/2)``.
    """
    _check_alpha(alpha, n)
    z1 = complex(0.5 * (n - alpha + 1.0), 0.5 * y)
    z2 = complex(0.5 * (alpha + 1.0), -0.5 * y)
    return cmath.exp(log_gamma(z1) + log_gamma(z2) - 0.5 * n * math.log(math.pi))


def _endpoint_integral(p: complex, q: complex) -> complex:
    """``integral over (0, 1/2] of s^(p-1) (1-s)^(q-1) ds`` with ``s = e^(-u)``.

    After the substitution the integrand is ``e^(-p u) (1 - e^(-u))^(q-1)``
    on ``[ln 2, inf)``; past ``_K_HAT_SPLIT_U`` the second factor is 1 to
    double precision and the rest integrates to ``e^(-p U) / p``.
    """
    U = _K_HAT_SPLIT_U

    def f(u):
        return cmath.exp(-p * u + (q - 1.0) * math.log1p(-math.exp(-u)))

    # one subinterval per half period of the oscillation keeps QUADPACK honest
    periods = abs(p.imag) * (U - math.log(2.0)) / math.pi
    pieces = max(1, int(math.ceil(periods)))
    pts = np.linspace(math.log(2.0), U, pieces + 1)[1:-1]
    val, _ = quadrature.integrate_segments(
        f, math.log(2.0), U, pts, epsrel=0.1 * K_HAT_RTOL, complex_func=True
    )
    return val + cmath.exp(-p * U) / p


def k_hat_numeric(y: float, alpha: float, n: int) -> complex:
    """``integral of k(t) t^(alpha - i y) dln t`` by quadrature.

    ``s = 1/(1 + t^2)`` turns it into ``(n c / 2) B(A, B)`` with complex
    ``A = (n - alpha + 1 + i y)/2``, ``B = (alpha + 1 - i y)/2``, written as a
    finite Beta-type integral over ``(0, 1)`` and split at ``s = 1/2``.
    """
    _check_alpha(alpha, n)
    A = complex(0.5 * (n - alpha + 1.0), 0.5 * y)
    B = complex(0.5 * (alpha + 1.0), -0.5 * y)
    beta = _endpoint_integral(A, B) + _endpoint_integral(B, A)
    return 0.5 * n * kappa_n(n) * beta


# --------------------------------------------------------------------------
# Tauberian squeeze


def squeeze_g(epsilon: float, sign: str = "plus") -> LogLineFunction:
    """``g_eps = 1[1, 1+eps) / eps`` (``plus``) or ``g_-eps = 1[1-eps, 1) / eps`` (``minus``)."""
    if not (0.0 < epsilon < 1.0):
        raise ValueError("epsilon must lie in (0, 1)")
    if sign in ("plus", "+"):
        return box(1.0, 1.0 + epsilon, 1.0 / epsilon)
    if sign in ("minus", "-"):
        return box(1.0 - epsilon, 1.0, 1.0 / epsilon)
    raise ValueError("sign must be 'plus' or 'minus'")


class SqueezeRow(NamedTuple):
    t: float
    lower: float
    M: float
    upper: float
    ok: bool


def squeeze_check(profile, epsilon: float, t_grid: Iterable[float], n: int) -> list[SqueezeRow]:
    """Check ``(M*g_eps)/(1+eps)^(n-1) <= M <= (M*g_-eps)/(1-eps)^(n-1)`` at each ``t``.

    ``profile`` is a ``RadialProfile`` or any callable ``M``.  A violation
    smaller than ``SQUEEZE_SLACK`` relative to the compared values is
    attributed to quadrature and not flagged.
    """
    if not (0.0 < epsilon < 1.0):
        raise ValueError("epsilon must lie in (0, 1)")
    M = _as_log_line(profile)
    gp = squeeze_g(epsilon, "plus")
    gm = squeeze_g(epsilon, "minus")
    rows = []
    for t in t_grid:
        t = float(t)
        m = M(t)
        lower = log_convolve(M, gp, t) / (1.0 + epsilon) ** (n - 1)
        upper = log_convolve(M, gm, t) / (1.0 - epsilon) ** (n - 1)
        slack = SQUEEZE_SLACK * max(abs(lower), abs(m), abs(upper))
        rows.append(SqueezeRow(t, lower, m, upper, lower <= m + slack and m <= upper + slack))
    return rows


def weak_limit_check(
    profile: RadialProfile,
    g: LogLineFunction,
    alpha: float,
    t_grid: Sequence[float],
    n: int,
    tol_limit: float = 1e-3,
    tol: float = WEAK_LIMIT_TOL,
) -> ConvergenceReport:
    """Sample ``t^alpha (M*g)(t)`` and compare with ``a C_alpha integral g t^alpha dln t``.

    ``a`` is the measured limit of ``u(0,t) t^alpha`` with ``u = k*M`` computed
    by a separate convolution.  The returned report traces ``t^alpha (M*g)``;
    ``details`` carries the prediction and the verdict ``agrees``.
    """
    _check_dimension(n)
    if not (-1.0 < alpha < n - 1):
        raise DomainError(f"weak-limit check needs -1 < alpha < {n - 1}, got {alpha}")
    g = _as_log_line(g)
    if not g.compact and not (g.tag == L1_LOG_WEIGHTED and g.alpha == -alpha):
        raise DomainError("g must be integrable against t^alpha dln t")
    ts = [float(t) for t in t_grid]
    k = kernel_function(n, alpha)
    M = _as_log_line(profile)
    trace = [log_convolve(k, M, t) * t**alpha for t in ts]
    smoothed = [log_convolve(M, g, t) * t**alpha for t in ts]
    a_report = make_report(ts, trace, tol_limit=tol_limit)
    report = make_report(ts, smoothed, tol_limit=tol_limit)

    g_moment = moment(g, alpha)
    predicted = None
    agrees = False
    if a_report.converged:
        predicted = a_report.extrapolated_limit * tauberian_constant(alpha, n) * g_moment
        if report.converged:
            measured = report.extrapolated_limit
            agrees = abs(measured - predicted) <= tol * abs(predicted) or measured == predicted == 0.0
    report.details.update(
        {
            "alpha": alpha,
            "trace_limit": a_report.extrapolated_limit,
            "trace_status": a_report.status,
            "g_moment": g_moment,
            "predicted": predicted,
            "tolerance": tol,
            "agrees": agrees,
        }
    )
    return report
