"""End-to-end verification suites built from the numerical modules.

Every suite returns a ``ConvergenceReport`` (or a ``BeurlingReport``) whose
``details["passed"]`` records the verdict; ``strict=True`` turns a failed
verdict into ``VerificationError``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass, field
from typing import Any, Iterable, Sequence

import numpy as np

from .halfspace import ApproachPath, extend, normal_trace_direct, nt_values, poisson_kernel
from .measures import (
    BoundaryMeasure,
    PointSequence,
    RadialProfile,
    atom_measure,
    beurling_sum,
    power_law_measure,
    separation_index,
    strong_derivative_probe,
    symmetric_derivative,
)
from .mellin import squeeze_check, squeeze_g, weak_limit_check
from .reports import CONVERGED, DIVERGED, INCONCLUSIVE, ConvergenceReport, log_grid, make_report
from .specfun import DomainError, ball_volume, tauberian_constant

__all__ = [
    "ConvergenceReport",
    "VerificationError",
    "InsufficientSpanError",
    "VerificationCase",
    "verify_theorem1_forward",
    "verify_theorem1_converse",
    "growth_order_estimate",
    "verify_nl1",
    "verify_nt1",
    "BeurlingReport",
    "beurling_report",
]

DEFAULT_TOLERANCE = 0.02
LIMIT_AGREEMENT = 0.01
SQUEEZE_EPSILONS = (0.1, 0.01)
NT_APERTURES = (0.0, 0.5, 1.0, 2.0)


class VerificationError(AssertionError):
    """A verification suite reached a failing verdict."""

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class InsufficientSpanError(ValueError):
    """Too few samples, or too narrow a range of t, for a growth-order fit."""


def _finish(report, strict: bool, name: str):
    if strict and not report.details.get("passed", False):
        raise VerificationError(f"{name} failed: {report.diagnostics}", report)
    return report


def safety_t_min(alpha: float, n: int, target: float = 0.005) -> float:
    """Height where the truncation error model ``t^(1 + alpha)`` reaches ``target``."""
    return target ** (1.0 / (1.0 + alpha)) if alpha < n - 1 else 1e-3


@dataclass
class VerificationCase:
    """A growth-equivalence test case: measure with ``mu(B(r)) = b r^(n-1-alpha)`` near O.

    Without an explicit ``measure`` the power-law measure truncated at ``R``
    is used (an atom of mass ``b`` at O when ``alpha = n - 1``; the zero
    measure when ``b = 0``).
    """

    n: int
    alpha: float
    b: float = 1.0
    R: float = 1.0
    t_grid: tuple[float, ...] = ()
    tolerance: float = DEFAULT_TOLERANCE
    measure: BoundaryMeasure | None = None

    def __post_init__(self):
        if not (-1.0 < self.alpha <= self.n - 1):
            raise DomainError(f"alpha must lie in (-1, {self.n - 1}], got {self.alpha}")
        if self.b < 0:
            raise ValueError("b must be nonnegative")
        if not self.t_grid:
            # at least a decade even when the error model allows stopping early
            self.t_grid = tuple(log_grid(1e-1, min(safety_t_min(self.alpha, self.n), 1e-2), 8))
        self.t_grid = tuple(float(t) for t in self.t_grid)
        if len(self.t_grid) < 2 or any(b >= a for a, b in zip(self.t_grid, self.t_grid[1:])):
            raise ValueError("t_grid must be strictly decreasing with at least two points")
        if self.measure is None:
            self.measure = self.default_measure()

    def default_measure(self) -> BoundaryMeasure:
        if self.b == 0:
            return BoundaryMeasure(self.n)
        if self.alpha == self.n - 1:
            return atom_measure(self.n, self.b)
        return power_law_measure(self.alpha, self.b, self.n, self.R)

    @property
    def expected_limit(self) -> float:
        """``a = b / C_alpha``, the limit of ``u(0, t) t^alpha``."""
        return self.b / tauberian_constant(self.alpha, self.n)

    def config(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "alpha": self.alpha,
            "b": self.b,
            "R": self.R,
            "t_grid": list(self.t_grid),
            "tolerance": self.tolerance,
        }


def _deviation_verdict(values, target: float, tolerance: float) -> tuple[bool, float]:
    last = float(values[-1])
    if target == 0:
        dev = abs(last)
        return dev <= tolerance, dev
    dev = abs(last / target - 1.0)
    return dev <= tolerance, dev


def _shrink_per_decade(ts, values, target: float) -> float | None:
    # ratio of the deviations one decade apart at the fine end of the grid
    ts = np.asarray(ts)
    dev = np.abs(np.asarray(values) / target - 1.0) if target else np.abs(values)
    lt = np.log10(ts)
    if lt[0] - lt[-1] < 1.0:
        return None
    k = int(np.argmin(np.abs(lt - (lt[-1] + 1.0))))
    if dev[-1] == 0:
        return math.inf
    return float((dev[k] / dev[-1]) ** (1.0 / (lt[k] - lt[-1])))


def verify_theorem1_forward(case: VerificationCase, strict: bool = False) -> ConvergenceReport:
    """Sample ``C_alpha u(0,t) t^alpha`` and check it against ``b``.

    The verdict uses the finest sample: ``|value/b - 1| <= tolerance``
    (absolute for ``b = 0``); the tolerance schedule lives in the case.
    """
    C = tauberian_constant(case.alpha, case.n)
    ts = case.t_grid
    values = [C * normal_trace_direct(case.measure, t) * t**case.alpha for t in ts]
    report = make_report(ts, values)
    passed, dev = _deviation_verdict(values, case.b, case.tolerance)
    report.details.update(
        {
            "suite": "theorem1_forward",
            "case": case.config(),
            "expected": case.b,
            "expected_trace_limit": case.expected_limit,
            "deviation": dev,
            "shrink_per_decade": _shrink_per_decade(ts, values, case.b),
            "passed": passed,
        }
    )
    report.diagnostics += f"; deviation {dev:.3g} at t = {ts[-1]:.3g}"
    return _finish(report, strict, "growth equivalence (forward)")


def verify_theorem1_converse(case: VerificationCase, strict: bool = False) -> ConvergenceReport:
    """Sample ``M(t) t^alpha`` and check it tracks the forward verdict.

    Also runs the two mechanisms of the converse: the squeeze inequality at
    ``eps = 0.1, 0.01`` and the weak limit for ``g = g_0.1``.  Passing means
    the forward and converse verdicts agree and both mechanisms hold.
    """
    mu, n, alpha = case.measure, case.n, case.alpha
    ts = case.t_grid
    profile = RadialProfile.from_measure(mu)
    values = [profile.M(t) * t**alpha for t in ts]
    report = make_report(ts, values)
    converse_ok, dev = _deviation_verdict(values, case.b, case.tolerance)
    forward = verify_theorem1_forward(case)
    forward_ok = forward.details["passed"]

    squeeze = {}
    for eps in SQUEEZE_EPSILONS:
        rows = squeeze_check(profile, eps, ts, n)
        squeeze[str(eps)] = all(r.ok for r in rows)
    squeeze_ok = all(squeeze.values())

    weak = None
    weak_ok = True
    if forward_ok and alpha < n - 1:
        # the limit rule needs a flat tail, so run down to a 1e-4 error model
        t_fine = min(ts[-1], safety_t_min(alpha, n, 1e-4))
        wl = weak_limit_check(profile, squeeze_g(0.1), alpha, log_grid(ts[0], t_fine, 8), n)
        weak = {k: wl.details[k] for k in ("predicted", "agrees", "trace_limit")}
        weak["measured"] = wl.extrapolated_limit
        weak_ok = bool(wl.details["agrees"])

    passed = (forward_ok == converse_ok) and squeeze_ok and weak_ok
    report.details.update(
        {
            "suite": "theorem1_converse",
            "case": case.config(),
            "expected": case.b,
            "deviation": dev,
            "converse_converged": converse_ok,
            "forward_converged": forward_ok,
            "squeeze": squeeze,
            "weak_limit": weak,
            "passed": passed,
        }
    )
    report.diagnostics += f"; forward {'ok' if forward_ok else 'fails'}, converse {'ok' if converse_ok else 'fails'}"
    return _finish(report, strict, "growth equivalence (converse)")


def growth_order_estimate(report_samples: Sequence[tuple[float, float]], n: int) -> float:
    """Order of growth from samples ``(t, u)``: slope of ``-log u`` against ``log t``.

    Needs at least 10 samples over at least 3 decades; the estimate is
    clamped to ``[-1, n - 1]`` with a warning when it falls outside.
    """
    samples = np.asarray(report_samples, dtype=float)
    if samples.ndim != 2 or samples.shape[0] < 10:
        raise InsufficientSpanError("need at least 10 samples")
    ts, us = samples[:, 0], samples[:, 1]
    if np.any(ts <= 0) or np.any(us <= 0):
        raise ValueError("samples must have positive t and u")
    if math.log10(ts.max() / ts.min()) < 3.0 - 1e-9:
        raise InsufficientSpanError("samples must span at least 3 decades of t")
    slope = float(np.polyfit(np.log(ts), -np.log(us), 1)[0])
    if slope < -1.0 or slope > n - 1:
        warnings.warn(f"growth order {slope:.4g} outside [-1, {n - 1}]; clamped", RuntimeWarning, stacklevel=2)
        slope = min(max(slope, -1.0), float(n - 1))
    return slope


def _limits_agree(a: ConvergenceReport, b: ConvergenceReport, tol: float) -> bool:
    la, lb = a.extrapolated_limit, b.extrapolated_limit
    scale = max(abs(la), abs(lb))
    return scale == 0 or abs(la - lb) <= tol * scale


def verify_nl1(mu: BoundaryMeasure, t_grid: Iterable[float], strict: bool = False) -> ConvergenceReport:
    """Normal limit of ``u`` against the symmetric derivative of ``mu`` at O.

    Passing means both converge with limits within 1%, or neither converges.
    """
    ts = [float(t) for t in t_grid]
    sym = symmetric_derivative(mu, ts)
    trace = make_report(ts, [normal_trace_direct(mu, t) for t in ts])
    both = sym.converged and trace.converged
    neither = not sym.converged and not trace.converged
    agree = both and _limits_agree(sym, trace, LIMIT_AGREEMENT)
    trace.details.update(
        {
            "suite": "nl1",
            "symmetric_derivative": sym.extrapolated_limit,
            "symmetric_status": sym.status,
            "normal_limit": trace.extrapolated_limit,
            "ball_volume": ball_volume(mu.m),
            "passed": agree or neither,
        }
    )
    return _finish(trace, strict, "NL1")


def verify_nt1(
    mu: BoundaryMeasure,
    apertures: Iterable[float] = NT_APERTURES,
    K_values: Iterable[float] = (1.0, 2.0, 5.0),
    t_grid: Iterable[float] | None = None,
    strict: bool = False,
) -> ConvergenceReport:
    """Cross-tabulate the strong-derivative probe against non-tangential limits.

    Paths run along every aperture in ``apertures`` and every direction
    ``+-e_i``.  The NT limit is taken to exist when every path converges and
    all limits agree to 1%.  Passing means existence agrees with the probe
    and, when both exist, the values agree to 1%.
    """
    if mu.n not in (3, 4):
        raise DomainError("NT verification needs n in {3, 4}")
    ts = tuple(float(t) for t in (t_grid if t_grid is not None else log_grid(1e-1, 1e-5, 4)))
    strong = strong_derivative_probe(mu, K_values, scales=ts)
    m = mu.m
    paths = {}
    for ap in apertures:
        dirs = [np.eye(m)[0]] if ap == 0 else [s * e for e in np.eye(m) for s in (1.0, -1.0)]
        for d in dirs:
            path = ApproachPath((0.0,) * m, ap, tuple(d), ts)
            paths[f"aperture={ap:g}:dir={tuple(int(x) for x in d)}"] = nt_values(mu, path)
    limits = [p.extrapolated_limit for p in paths.values() if p.converged]
    nt_exists = len(limits) == len(paths)
    if nt_exists:
        scale = max(abs(x) for x in limits)
        nt_exists = scale == 0 or (max(limits) - min(limits)) <= LIMIT_AGREEMENT * scale
    nt_limit = float(np.mean(limits)) if nt_exists else None
    normal = paths[next(iter(k for k in paths if k.startswith("aperture=0:")))] if 0.0 in apertures else None
    has_strong = bool(strong.details["strong_derivative"])
    passed = has_strong == nt_exists
    if passed and nt_exists:
        scale = max(abs(nt_limit), abs(strong.extrapolated_limit))
        passed = scale == 0 or abs(nt_limit - strong.extrapolated_limit) <= LIMIT_AGREEMENT * scale
    # an NT limit without a normal limit would contradict the path inclusion
    consistent = not (nt_exists and normal is not None and not normal.converged)
    report = ConvergenceReport(
        samples=strong.samples,
        extrapolated_limit=nt_limit,
        fitted_order=math.nan,
        status=CONVERGED if nt_exists else (DIVERGED if any(p.status == DIVERGED for p in paths.values()) else INCONCLUSIVE),
        diagnostics=f"strong derivative {'exists' if has_strong else 'absent'}; NT limit {'exists' if nt_exists else 'absent'}",
        details={
            "suite": "nt1",
            "strong_derivative": strong.extrapolated_limit,
            "strong_status": strong.status,
            "nt_exists": nt_exists,
            "path_status": {k: p.status for k, p in paths.items()},
            "path_limits": {k: p.extrapolated_limit for k, p in paths.items()},
            "normal_limit": normal.extrapolated_limit if normal is not None else None,
            "nt_implies_normal": consistent,
            "passed": passed and consistent,
        },
    )
    return _finish(report, strict, "NT1")


@dataclass
class BeurlingReport:
    separation_index: float
    classification: str
    partial_sums: list[float]
    ratios: list[float]
    min_ratio: float
    atom_mass: float
    atom_inequality: bool | None
    kappa: float
    hypothesis_holds: bool
    implication_consistent: bool | None
    details: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def beurling_report(seq: PointSequence, mu: BoundaryMeasure, kappa: float = 0.0) -> BeurlingReport:
    """Beurling-series verdict and point-mass checks for ``u`` along ``seq``.

    ``ratios`` are ``u(z_i) / K(z_i - O)``; their minimum is an empirical
    lower bound for the point mass at O.  With an atom of mass ``m`` at O the
    inequality ``u(z_i) >= m K(z_i - O)`` is checked exactly.  If the sequence
    is classified divergent and ``u(z_i) >= kappa K(z_i - O)`` for every ``i``,
    the implication predicts an atom of mass at least ``kappa``; whether
    ``mu`` has one is reported in ``implication_consistent``.
    """
    if seq.n != mu.n:
        raise ValueError("sequence and measure dimensions differ")
    base = np.asarray(seq.base)
    us, ks = [], []
    for row in seq.points:
        x, t = row[:-1], float(row[-1])
        us.append(extend(mu, (tuple(x), t)))
        ks.append(poisson_kernel(x - base, t, mu.n))
    m = mu.atom_mass_at_origin() if not np.any(base) else 0.0
    ratios = [u / k for u, k in zip(us, ks)]
    partial, label = beurling_sum(seq)
    atom_ok = all(u >= m * k for u, k in zip(us, ks)) if m > 0 else None
    hypothesis = kappa > 0 and all(u >= kappa * k for u, k in zip(us, ks))
    implication = (m >= kappa) if (label == "diverges" and hypothesis) else None
    return BeurlingReport(
        separation_index=separation_index(seq),
        classification=label,
        partial_sums=partial,
        ratios=ratios,
        min_ratio=min(ratios),
        atom_mass=m,
        atom_inequality=atom_ok,
        kappa=kappa,
        hypothesis_holds=hypothesis,
        implication_consistent=implication,
        details={"u": us, "kernel": ks},
    )
