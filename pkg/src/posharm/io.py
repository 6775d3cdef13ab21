"""JSON readers and writers for measures, cases and point sequences.

Flat measure::

    {"n": 3,
     "atoms": [{"xi": [0, 0], "mass": 1}],
     "radials": [{"coeff": 1, "q": -0.5, "r0": 0, "r1": "inf"}],
     "power_laws": [{"alpha": 0.5, "b": 1, "R": 1}],
     "patches": [{"lo": [-1, -1], "hi": [1, 1], "density": 2}]}

Sphere measure::

    {"n": 3, "base_point": [0, 0, 1],
     "caps": [{"coeff": 1, "q": 0, "r0": 0, "r1": 0.5}],
     "cap_powers": [{"alpha": 0.5, "b": 1, "r_max": 0.5}],
     "atoms": [{"zeta": [0, 0, 1], "mass": 1}],
     "patches": [{"r0": 0, "r1": 2, "density": 1}]}

``power_laws`` and ``cap_powers`` are shorthands for the calibrated
constructors.  Every list is optional.
"""
from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any

import numpy as np

from .ball import Cap, CapPatch, SphereAtom, SphereMeasure, cap_power_measure
from .harness import VerificationCase
from .measures import Atom, BoundaryMeasure, Patch, PointSequence, RadialPower, power_law_measure
from .reports import log_grid

__all__ = [
    "InputError",
    "load_json",
    "parse_measure",
    "measure_to_dict",
    "parse_sphere_measure",
    "parse_case",
    "parse_sequence",
]


class InputError(ValueError):
    """Malformed JSON input."""


def load_json(path) -> dict[str, Any]:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise InputError(f"{path} must hold a JSON object")
    return data


def _num(value, name: str) -> float:
    if isinstance(value, str) and value.lower() in ("inf", "infinity"):
        return math.inf
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InputError(f"{name} must be a number, got {value!r}")
    return float(value)


def _vec(value, name: str) -> tuple[float, ...]:
    if not isinstance(value, (list, tuple)):
        raise InputError(f"{name} must be an array of numbers")
    return tuple(_num(v, name) for v in value)


def _get(d: dict, key: str, name: str):
    if not isinstance(d, dict) or key not in d:
        raise InputError(f"{name} is missing field {key!r}")
    return d[key]


def _dimension(d: dict) -> int:
    n = _get(d, "n", "input")
    if isinstance(n, bool) or not isinstance(n, int):
        raise InputError("n must be an integer")
    return n


def parse_measure(d: dict) -> BoundaryMeasure:
    n = _dimension(d)
    try:
        mu = BoundaryMeasure(
            n,
            atoms=tuple(Atom(_vec(_get(a, "xi", "atom"), "xi"), _num(_get(a, "mass", "atom"), "mass")) for a in d.get("atoms", [])),
            radials=tuple(
                RadialPower(
                    _num(_get(r, "coeff", "radial"), "coeff"),
                    _num(_get(r, "q", "radial"), "q"),
                    _num(r.get("r0", 0.0), "r0"),
                    _num(r.get("r1", "inf"), "r1"),
                )
                for r in d.get("radials", [])
            ),
            patches=tuple(
                Patch(_vec(_get(p, "lo", "patch"), "lo"), _vec(_get(p, "hi", "patch"), "hi"), _num(_get(p, "density", "patch"), "density"))
                for p in d.get("patches", [])
            ),
        )
        for pl in d.get("power_laws", []):
            mu = mu + power_law_measure(
                _num(_get(pl, "alpha", "power law"), "alpha"),
                _num(_get(pl, "b", "power law"), "b"),
                n,
                _num(pl.get("R", 1.0), "R"),
            )
    except InputError:
        raise
    except (ValueError, TypeError) as exc:
        raise InputError(str(exc)) from exc
    return mu


def _json_num(x: float):
    return "inf" if math.isinf(x) else x


def measure_to_dict(mu: BoundaryMeasure) -> dict[str, Any]:
    """Inverse of ``parse_measure`` for atoms, power radials and patches."""
    radials = []
    for rc in mu.radials:
        if not isinstance(rc, RadialPower):
            raise InputError("tabulated radial components have no JSON form")
        radials.append({"coeff": rc.coeff, "q": rc.q, "r0": rc.r0, "r1": _json_num(rc.r1)})
    return {
        "n": mu.n,
        "atoms": [{"xi": list(a.location), "mass": a.mass} for a in mu.atoms],
        "radials": radials,
        "patches": [{"lo": list(p.lo), "hi": list(p.hi), "density": p.density} for p in mu.patches],
    }


def parse_sphere_measure(d: dict) -> SphereMeasure:
    n = _dimension(d)
    try:
        x0 = _vec(_get(d, "base_point", "sphere measure"), "base_point")
        mu = SphereMeasure(
            n,
            x0,
            caps=tuple(
                Cap(
                    _num(_get(c, "coeff", "cap"), "coeff"),
                    _num(_get(c, "q", "cap"), "q"),
                    _num(c.get("r0", 0.0), "r0"),
                    _num(c.get("r1", 2.0), "r1"),
                )
                for c in d.get("caps", [])
            ),
            atoms=tuple(SphereAtom(_vec(_get(a, "zeta", "atom"), "zeta"), _num(_get(a, "mass", "atom"), "mass")) for a in d.get("atoms", [])),
            patches=tuple(
                CapPatch(_num(_get(p, "r0", "patch"), "r0"), _num(_get(p, "r1", "patch"), "r1"), _num(_get(p, "density", "patch"), "density"))
                for p in d.get("patches", [])
            ),
        )
        for cp in d.get("cap_powers", []):
            mu = mu + cap_power_measure(
                _num(_get(cp, "alpha", "cap power"), "alpha"),
                _num(_get(cp, "b", "cap power"), "b"),
                n,
                _num(cp.get("r_max", 1.0), "r_max"),
                base_point=x0,
            )
    except InputError:
        raise
    except (ValueError, TypeError) as exc:
        raise InputError(str(exc)) from exc
    return mu


def parse_case(d: dict) -> VerificationCase:
    """``{"n", "alpha", "b", "R", "t_min", "t_max", "points_per_decade", "tolerance"}``.

    Only ``n`` and ``alpha`` are required; an optional ``"measure"`` object
    replaces the default power-law measure.
    """
    n = _dimension(d)
    try:
        alpha = _num(_get(d, "alpha", "case"), "alpha")
        t_grid = ()
        if "t_min" in d or "t_max" in d:
            ppd = d.get("points_per_decade", 8)
            if isinstance(ppd, bool) or not isinstance(ppd, int) or ppd < 1:
                raise InputError("points_per_decade must be a positive integer")
            t_grid = tuple(log_grid(_num(d.get("t_max", 1e-1), "t_max"), _num(_get(d, "t_min", "case"), "t_min"), ppd))
        kw = {}
        if "tolerance" in d:
            kw["tolerance"] = _num(d["tolerance"], "tolerance")
        measure = parse_measure(d["measure"]) if "measure" in d else None
        return VerificationCase(
            n,
            alpha,
            _num(d.get("b", 1.0), "b"),
            _num(d.get("R", 1.0), "R"),
            t_grid,
            measure=measure,
            **kw,
        )
    except InputError:
        raise
    except (ValueError, TypeError) as exc:
        raise InputError(str(exc)) from exc


def parse_sequence(d: dict) -> PointSequence:
    """``{"n", "base", "points"}`` with ``points`` rows ``[x_1, ..., x_{n-1}, t]``."""
    n = _dimension(d)
    try:
        pts = np.asarray([_vec(p, "point") for p in _get(d, "points", "sequence")], dtype=float)
        base = _vec(d["base"], "base") if d.get("base") is not None else None
        return PointSequence(pts, n, base)
    except InputError:
        raise
    except (ValueError, TypeError) as exc:
        raise InputError(str(exc)) from exc
