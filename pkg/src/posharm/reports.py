"""Sampled limit traces and the limit-detection rule shared by every suite."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Any, Sequence

import numpy as np

CONVERGED = "converged"
DIVERGED = "diverged"
INCONCLUSIVE = "inconclusive"

TOL_LIMIT = 1e-3
SLOPE_TOL = 0.05
DIVERGENCE_FACTOR = 10.0
TAIL = 5


@dataclass
class ConvergenceReport:
    """A trace ``{(t_k, value_k)}`` sampled with ``t`` strictly decreasing.

    ``fitted_order`` is the log-log slope ``d log|value| / d log t`` over the
    tail; positive means the values decay as ``t -> 0``.
    """

    samples: list[tuple[float, float]]
    extrapolated_limit: float | None
    fitted_order: float
    status: str
    diagnostics: str = ""
    details: dict[str, Any] = field(default_factory=dict)

    @property
    def ts(self) -> np.ndarray:
        return np.array([s[0] for s in self.samples])

    @property
    def values(self) -> np.ndarray:
        return np.array([s[1] for s in self.samples])

    @property
    def converged(self) -> bool:
        return self.status == CONVERGED

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d["samples"] = [[float(t), _json_float(v)] for t, v in self.samples]
        d["extrapolated_limit"] = _json_float(self.extrapolated_limit)
        d["fitted_order"] = _json_float(self.fitted_order)
        return d


def _json_float(x):
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else None


def loglog_slope(ts: Sequence[float], values: Sequence[float]) -> float:
    """Least-squares slope of log|value| against log t (nan if any value is 0)."""
    ts = np.asarray(ts, dtype=float)
    vs = np.abs(np.asarray(values, dtype=float))
    if len(ts) < 2 or np.any(vs == 0.0) or not np.all(np.isfinite(vs)):
        return math.nan
    return float(np.polyfit(np.log(ts), np.log(vs), 1)[0])


def classify(
    ts: Sequence[float],
    values: Sequence[float],
    tol_limit: float = TOL_LIMIT,
    slope_tol: float = SLOPE_TOL,
) -> tuple[str, float | None, float, str]:
    """Apply the limit-detection rule to a trace sampled at decreasing ``ts``.

    converged:
        the last five values agree pairwise to ``tol_limit`` (relative) and
        their log-log slope is at most ``slope_tol`` in magnitude; or they are
        all exactly zero; or they decrease monotonically toward 0 like a power
        ``t^p`` with ``p >= slope_tol`` (limit 0).
    diverged:
        the values grow monotonically by at least 10x over the grid.
    inconclusive:
        anything else.

    Returns ``(status, limit, fitted_order, diagnostics)``.
    """
    ts = np.asarray(ts, dtype=float)
    vs = np.asarray(values, dtype=float)
    if len(ts) < TAIL:
        return INCONCLUSIVE, None, math.nan, f"need at least {TAIL} samples"
    if np.any(np.diff(ts) >= 0):
        raise ValueError("samples must be strictly decreasing in t")
    tail_t, tail_v = ts[-TAIL:], vs[-TAIL:]
    slope = loglog_slope(tail_t, tail_v)

    if not np.all(np.isfinite(vs)):
        return INCONCLUSIVE, None, slope, "non-finite values"
    if np.all(tail_v == 0.0):
        return CONVERGED, 0.0, math.nan, "tail identically zero"

    scale = np.max(np.abs(tail_v))
    spread = (np.max(tail_v) - np.min(tail_v)) / scale
    if spread <= tol_limit and abs(slope) <= slope_tol:
        return CONVERGED, float(tail_v[-1]), slope, f"tail spread {spread:.3g}, slope {slope:.3g}"

    if np.all(tail_v > 0) and np.all(np.diff(tail_v) < 0) and slope >= slope_tol:
        return CONVERGED, 0.0, slope, f"power decay to zero, order {slope:.3g}"

    steps = np.diff(vs)
    if vs[0] > 0 and np.all(steps > 0) and vs[-1] >= DIVERGENCE_FACTOR * vs[0]:
        return DIVERGED, None, slope, f"monotone growth x{vs[-1] / vs[0]:.3g}"

    return INCONCLUSIVE, None, slope, f"tail spread {spread:.3g}, slope {slope:.3g}"


def make_report(ts, values, **kw) -> ConvergenceReport:
    ts = [float(t) for t in ts]
    values = [float(v) for v in values]
    details = kw.pop("details", {})
    status, limit, order, diag = classify(ts, values, **kw)
    return ConvergenceReport(
        samples=list(zip(ts, values)),
        extrapolated_limit=limit,
        fitted_order=order,
        status=status,
        diagnostics=diag,
        details=details,
    )


def log_grid(t_max: float, t_min: float, points_per_decade: int) -> np.ndarray:
    """Decreasing log-spaced grid from ``t_max`` down to ``t_min`` inclusive."""
    if not (0 < t_min < t_max):
        raise ValueError("need 0 < t_min < t_max")
    decades = math.log10(t_max / t_min)
    count = max(2, int(round(decades * points_per_decade)) + 1)
    return np.logspace(math.log10(t_max), math.log10(t_min), count)
