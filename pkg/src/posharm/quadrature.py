"""Adaptive Gauss-Kronrod integration with hard failure.

Thin layer over QUADPACK (``scipy.integrate.quad``): splits at user
breakpoints, accepts infinite end points, and raises ``QuadratureError``
instead of returning a silently inaccurate value.
"""
from __future__ import annotations

import math
import warnings
from typing import Callable, Iterable

from scipy import integrate

EPSABS = 1e-14
EPSREL = 1e-10
# QUADPACK subdivision budget; 2**60 bisection depth is never approached
LIMIT = 200


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to meet its error target."""


def _one(f, a, b, epsabs, epsrel, limit, complex_func):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        if complex_func:
            val, err = integrate.quad(
                f, a, b, epsabs=epsabs, epsrel=epsrel, limit=limit, complex_func=True
            )
            err = abs(err)
        else:
            val, err = integrate.quad(f, a, b, epsabs=epsabs, epsrel=epsrel, limit=limit)
    target = max(epsabs, epsrel * abs(val))
    # QUADPACK flags roundoff long before the estimate is actually bad
    if not math.isfinite(abs(val)) or err > 100.0 * target:
        raise QuadratureError(
            f"quadrature on [{a:.6g}, {b:.6g}] did not converge: value {val!r}, error {err:.3g}"
        )
    return val, err


def integrate_segments(
    f: Callable[[float], float],
    a: float,
    b: float,
    points: Iterable[float] = (),
    *,
    epsabs: float = EPSABS,
    epsrel: float = EPSREL,
    limit: int = LIMIT,
    complex_func: bool = False,
):
    """Integrate ``f`` over ``[a, b]``, splitting at every interior point.

    Returns ``(value, error_estimate)``.  Either end may be infinite.
    """
    if a == b:
        return 0.0, 0.0
    sign = 1.0
    if a > b:
        a, b = b, a
        sign = -1.0
    cuts = sorted({p for p in points if a < p < b and math.isfinite(p)})
    edges = [a, *cuts, b]
    total = 0.0
    error = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        if hi <= lo:
            continue
        val, err = _one(f, lo, hi, epsabs, epsrel, limit, complex_func)
        total += val
        error += err
    return sign * total, error


def integrate_power(
    g: Callable[[float], float],
    e: float,
    lo: float,
    hi: float,
    points: Iterable[float] = (),
    **kw,
):
    """Integrate ``g(r) * r**(e - 1)`` over ``[lo, hi]`` for ``e > 0``.

    The stretch from 0 (if ``lo == 0``) to the first breakpoint uses
    ``v = r**e``, which absorbs the algebraic singularity; the rest runs in
    ``w = log r`` so that wide power-law ranges and infinite tails stay
    smooth.  Returns ``(value, error_estimate)``.
    """
    if e <= 0.0:
        raise ValueError(f"power exponent must be positive, got {e}")
    if hi <= lo:
        return 0.0, 0.0
    inner = sorted({p for p in points if lo < p < hi and math.isfinite(p) and p > 0.0})
    total = 0.0
    error = 0.0
    start = lo
    if lo == 0.0:
        first = inner.pop(0) if inner else (hi if math.isfinite(hi) else 1.0)
        val, err = integrate_segments(
            lambda v: g(v ** (1.0 / e)), 0.0, first**e, **kw
        )
        total += val / e
        error += err / e
        start = first
        if start >= hi:
            return total, error
    lw = math.log(start)
    hw = math.log(hi) if math.isfinite(hi) else math.inf

    def in_log(w):
        if w > 600.0:
            # integrable tails have long since underflowed
            return 0.0
        r = math.exp(w)
        try:
            val = g(r)
        except OverflowError:
            # only reachable deep in a decaying tail
            return 0.0
        if val == 0.0:
            return 0.0
        return math.copysign(math.exp(math.log(abs(val)) + e * w), val)

    val, err = integrate_segments(in_log, lw, hw, [math.log(p) for p in inner], **kw)
    return total + val, error + err
