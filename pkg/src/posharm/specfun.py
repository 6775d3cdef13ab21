"""Special functions: complex log-Gamma, Beta, sphere/ball constants.

Complex values are plain Python ``complex``.  The log-Gamma here is the
analytic continuation of the real ``lgamma`` from the positive axis, with the
branch cut on the negative real axis (the same convention as
``scipy.special.loggamma``).
"""
from __future__ import annotations

import cmath
import math

__all__ = [
    "PoleError",
    "DomainError",
    "log_gamma",
    "gamma",
    "log_beta",
    "kappa_n",
    "sphere_area",
    "ball_volume",
    "tauberian_constant",
]

LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
LOG_PI = math.log(math.pi)

# Bernoulli numbers B_{2k} for the Stirling series, k = 1..10
_BERNOULLI = (
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
)
_STIRLING_COEFFS = tuple(b / ((2 * k + 2) * (2 * k + 1)) for k, b in enumerate(_BERNOULLI))

# Stirling is used once |z| exceeds this; below it we recur upward.
_STIRLING_MIN = 16.0


class PoleError(ValueError):
    """Gamma evaluated at a nonpositive integer."""


class DomainError(ValueError):
    """Argument outside the documented domain of a constant or transform."""


def _as_complex(z) -> complex:
    if isinstance(z, tuple):
        return complex(z[0], z[1])
    return complex(z)


def _stirling(z: complex) -> complex:
    # log Gamma(z) for Re z > 0 and |z| >= _STIRLING_MIN
    inv = 1.0 / z
    inv2 = inv * inv
    series = 0j
    power = inv
    for c in _STIRLING_COEFFS:
        series += c * power
        power *= inv2
    return (z - 0.5) * cmath.log(z) - z + LOG_SQRT_2PI + series


def _log_gamma_right(z: complex) -> complex:
    # Re z >= 0.5: shift up with Gamma(z) = Gamma(z + m) / prod(z + j)
    shift = 0j
    while abs(z) < _STIRLING_MIN:
        shift += cmath.log(z)
        z += 1.0
    return _stirling(z) - shift


def _log_sin_pi(z: complex) -> complex:
    """Analytic continuation of log(sin(pi z)) over the closed upper half-plane.

    sin(pi z) = (i/2) e^{-i pi z} (1 - e^{2 i pi z}); the last factor has
    positive real part for Im z > 0, so its principal log is continuous.
    Normalized so the value is real on (0, 1).
    """
    # 1 - e^(2 i pi z) by a complex expm1 on the fractional part, so it stays
    # accurate next to the integers
    w = z - round(z.real)
    x, y = -2.0 * math.pi * w.imag, 2.0 * math.pi * w.real
    em1 = complex(math.expm1(x) * math.cos(y) - 2.0 * math.sin(0.5 * y) ** 2, math.exp(x) * math.sin(y))
    return -math.log(2.0) + 1j * math.pi * (0.5 - z) + cmath.log(-em1)


def log_gamma(z) -> complex:
    """Log-Gamma of a complex argument.

    ``z`` may be a complex, a real, or a ``(re, im)`` pair.  The reflection
    formula is used for ``Re z < 0.5``.

    >>> log_gamma(1.0)
    0j
    """
    z = _as_complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"non-finite argument {z!r}")
    if z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real):
        raise PoleError(f"Gamma has a pole at {z.real:g}")
    if z.real >= 0.5:
        return _log_gamma_right(z)
    # lower side of the cut, including -0.0, mirrors the upper side
    if math.copysign(1.0, z.imag) < 0.0:
        return log_gamma(z.conjugate()).conjugate()
    return LOG_PI - _log_sin_pi(z) - _log_gamma_right(1.0 - z)


def gamma(z) -> complex:
    return cmath.exp(log_gamma(z))


def log_beta(a, b) -> complex:
    return log_gamma(a) + log_gamma(b) - log_gamma(_as_complex(a) + _as_complex(b))


def kappa_n(n: int) -> float:
    """Poisson-kernel constant Gamma(n/2) / pi^(n/2) of the half-space R^n_+."""
    _check_dimension(n)
    return math.exp(math.lgamma(n / 2.0) - 0.5 * n * LOG_PI)


def sphere_area(m: int) -> float:
    """Surface area of the unit sphere S^m in R^(m+1)."""
    if m < 0:
        raise DomainError(f"sphere dimension must be >= 0, got {m}")
    h = 0.5 * (m + 1)
    return 2.0 * math.exp(h * LOG_PI - math.lgamma(h))


def ball_volume(m: int) -> float:
    """Volume of the unit ball in R^m (m = 0 gives 1)."""
    if m < 0:
        raise DomainError(f"ball dimension must be >= 0, got {m}")
    return math.exp(0.5 * m * LOG_PI - math.lgamma(0.5 * m + 1.0))


def tauberian_constant(alpha: float, n: int) -> float:
    """C_alpha = pi^(n/2) / (Gamma((n - alpha + 1)/2) Gamma((alpha + 1)/2)).

    If ``u(0, t) t^alpha -> a`` and ``mu(B(r)) r^(alpha - n + 1) -> b`` then
    ``b = C_alpha * a``.  Valid for ``-1 < alpha <= n - 1``.
    """
    _check_dimension(n)
    if not (-1.0 < alpha <= n - 1):
        raise DomainError(f"alpha must lie in (-1, {n - 1}], got {alpha}")
    return math.exp(
        0.5 * n * LOG_PI - math.lgamma(0.5 * (n - alpha + 1.0)) - math.lgamma(0.5 * (alpha + 1.0))
    )


def _check_dimension(n: int) -> None:
    if int(n) != n or n < 2:
        raise DomainError(f"dimension must be an integer >= 2, got {n}")
