"""Command line front end: JSON in, CSV or JSON out.

Exit status is 0 on success, 1 when a verification fails and 2 on bad input.
Grids are written ``a:b:logN`` (N log-spaced points from a to b), ``a:b:N``
(N evenly spaced points) or a single number.
"""
from __future__ import annotations

import argparse
import contextlib
import csv
import json
import math
import re
import sys
from typing import Sequence

import numpy as np

from . import ball as ballmod
from .halfspace import extend, normal_trace_direct
from .harness import beurling_report, verify_theorem1_converse, verify_theorem1_forward
from .io import InputError, load_json, parse_case, parse_measure, parse_sequence, parse_sphere_measure
from .measures import RadialProfile, strong_derivative_probe, symmetric_derivative
from .mellin import k_hat_closed, k_hat_numeric
from .reports import log_grid
from .specfun import tauberian_constant

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2

MELLIN_AGREEMENT = 1e-8
FLOAT_FORMAT = "%.15e"


def parse_grid(text: str) -> np.ndarray:
    parts = text.split(":")
    try:
        if len(parts) == 1:
            return np.array([float(parts[0])])
        if len(parts) != 3:
            raise ValueError
        a, b = float(parts[0]), float(parts[1])
        spec = parts[2].strip()
        if spec.startswith("log"):
            count = int(spec[3:])
            if a <= 0 or b <= 0:
                raise InputError(f"log grid needs positive end points: {text!r}")
            grid = np.logspace(math.log10(a), math.log10(b), count)
        else:
            count = int(spec)
            grid = np.linspace(a, b, count)
    except InputError:
        raise
    except ValueError as exc:
        raise InputError(f"cannot parse grid {text!r}; use a:b:N or a:b:logN") from exc
    if count < 1:
        raise InputError("grid needs at least one point")
    return grid


def parse_vector(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(",")) if text.strip() else ()
    except ValueError as exc:
        raise InputError(f"cannot parse vector {text!r}") from exc


def _write_csv(out, header: Sequence[str], rows) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([FLOAT_FORMAT % v for v in row])


def _open_out(path):
    return open(path, "w", newline="") if path else contextlib.nullcontext(sys.stdout)


def _dump(obj, path=None) -> None:
    text = json.dumps(obj, indent=2, default=_json_default, allow_nan=False)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _json_default(x):
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, np.bool_):
        return bool(x)
    raise TypeError(f"not JSON serializable: {type(x).__name__}")


def _clean(obj):
    # JSON has no inf/nan
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (float, np.floating)):
        return float(obj) if math.isfinite(obj) else None
    return obj


# --------------------------------------------------------------------------
# subcommands


def cmd_extend(args) -> int:
    mu = parse_measure(load_json(args.measure))
    x = parse_vector(args.x) if args.x else (0.0,) * mu.m
    print(FLOAT_FORMAT % extend(mu, (x, args.t)))
    return EXIT_OK


def cmd_trace(args) -> int:
    mu = parse_measure(load_json(args.measure))
    C = tauberian_constant(args.alpha, mu.n)
    profile = RadialProfile.from_measure(mu)
    rows = []
    for t in parse_grid(args.t):
        u = normal_trace_direct(mu, t)
        rows.append((t, u, u * t**args.alpha, profile.M(t) * t**args.alpha / C))
    with _open_out(args.out) as out:
        _write_csv(out, ("t", "u", "u_t_alpha", "target"), rows)
    return EXIT_OK


def cmd_mellin(args) -> int:
    rows = []
    worst = 0.0
    for y in parse_grid(args.y):
        c = k_hat_closed(y, args.alpha, args.n)
        d = k_hat_numeric(y, args.alpha, args.n)
        diff = abs(c - d)
        worst = max(worst, diff)
        rows.append((y, c.real, c.imag, d.real, d.imag, diff))
    with _open_out(args.out) as out:
        _write_csv(out, ("y", "closed_re", "closed_im", "numeric_re", "numeric_im", "abs_diff"), rows)
    return EXIT_OK if worst <= MELLIN_AGREEMENT else EXIT_FAIL


def cmd_verify(args) -> int:
    case = parse_case(load_json(args.case))
    reports = {}
    if args.direction in ("forward", "both"):
        reports["forward"] = verify_theorem1_forward(case).to_dict()
    if args.direction in ("converse", "both"):
        reports["converse"] = verify_theorem1_converse(case).to_dict()
    passed = all(r["details"]["passed"] for r in reports.values())
    _dump(_clean({"passed": passed, "reports": reports}), args.out)
    return EXIT_OK if passed else EXIT_FAIL


def cmd_derivative(args) -> int:
    mu = parse_measure(load_json(args.measure))
    grid = parse_grid(args.t) if args.t else log_grid(1e-1, 1e-5, 4)
    if grid[0] < grid[-1]:
        grid = grid[::-1]
    out = {"symmetric": symmetric_derivative(mu, grid).to_dict()}
    if not args.symmetric_only:
        out["strong"] = strong_derivative_probe(mu, scales=grid).to_dict()
    _dump(_clean(out), args.out)
    return EXIT_OK


def cmd_beurling(args) -> int:
    data = load_json(args.sequence)
    seq = parse_sequence(data)
    if args.measure:
        mu = parse_measure(load_json(args.measure))
    else:
        mu = parse_measure({"n": seq.n})
    rep = beurling_report(seq, mu, args.kappa)
    _dump(_clean(rep.to_dict()), args.out)
    # an atom inequality can only fail through a bug; report it as a failure
    return EXIT_FAIL if rep.atom_inequality is False else EXIT_OK


def cmd_ball_extend(args) -> int:
    mu = parse_sphere_measure(load_json(args.measure))
    print(FLOAT_FORMAT % ballmod.ball_extend(mu, parse_vector(args.y)))
    return EXIT_OK


def cmd_ball_trace(args) -> int:
    mu = parse_sphere_measure(load_json(args.measure))
    n = mu.n
    C = tauberian_constant(args.alpha, n)
    x0 = np.asarray(mu.base_point)
    rows = []
    for t in parse_grid(args.t):
        u = ballmod.ball_extend(mu, tuple(x0 * (1.0 - t)))
        target = ballmod.cap_mass(mu, t) * t ** (args.alpha - (n - 1)) / C
        rows.append((t, u, u * t**args.alpha, target))
    with _open_out(args.out) as out:
        _write_csv(out, ("t", "u", "u_t_alpha", "target"), rows)
    return EXIT_OK


def cmd_ball_mass(args) -> int:
    mu = parse_sphere_measure(load_json(args.measure))
    rows = [(r, ballmod.cap_mass(mu, r)) for r in parse_grid(args.r)]
    with _open_out(args.out) as out:
        _write_csv(out, ("r", "mass"), rows)
    return EXIT_OK


def cmd_ball_project(args) -> int:
    mu = parse_sphere_measure(load_json(args.measure))
    flat = ballmod.project_pushforward(mu, args.epsilon)
    C = tauberian_constant(args.alpha, mu.n)
    x0 = np.asarray(mu.base_point)
    rows = []
    for t in parse_grid(args.t):
        ub = ballmod.ball_extend(mu, tuple(x0 * (1.0 - t)))
        uh = normal_trace_direct(flat, t)
        rows.append((t, C * ub * t**args.alpha, C * uh * t**args.alpha))
    with _open_out(args.out) as out:
        _write_csv(out, ("t", "ball_scaled", "halfspace_scaled"), rows)
    return EXIT_OK


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="posharm", description="Boundary growth of positive harmonic functions.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("extend", help="Poisson extension of a measure at one point")
    s.add_argument("--measure", required=True, help="measure JSON")
    s.add_argument("--x", default="", help="boundary coordinates, comma separated (default O)")
    s.add_argument("--t", type=float, required=True, help="height > 0")
    s.set_defaults(func=cmd_extend)

    s = sub.add_parser("trace", help="normal trace u(0,t) on a grid, as CSV")
    s.add_argument("--measure", required=True)
    s.add_argument("--t", required=True, help="grid a:b:logN or a:b:N")
    s.add_argument("--alpha", type=float, default=0.0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_trace)

    s = sub.add_parser("mellin", help="closed vs numeric transform of k t^alpha, as CSV")
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--y", default="-10:10:41")
    s.add_argument("--out")
    s.set_defaults(func=cmd_mellin)

    s = sub.add_parser("verify", help="run the growth-equivalence suites on a case JSON")
    s.add_argument("--case", required=True)
    s.add_argument("--direction", choices=("forward", "converse", "both"), default="both")
    s.add_argument("--out")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("derivative", help="symmetric and strong derivative reports at O")
    s.add_argument("--measure", required=True)
    s.add_argument("--t", help="radius grid (default 1e-1 .. 1e-5)")
    s.add_argument("--symmetric-only", action="store_true")
    s.add_argument("--out")
    s.set_defaults(func=cmd_derivative)

    s = sub.add_parser("beurling", help="Beurling series and point-mass checks along a sequence")
    s.add_argument("--sequence", required=True)
    s.add_argument("--measure", help="measure JSON (default: zero measure)")
    s.add_argument("--kappa", type=float, default=0.0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_beurling)

    s = sub.add_parser("ball", help="unit-ball counterparts")
    bsub = s.add_subparsers(dest="ball_command", required=True)
    b = bsub.add_parser("extend", help="Poisson extension in the unit ball")
    b.add_argument("--measure", required=True, help="sphere-measure JSON")
    b.add_argument("--y", required=True, help="interior point, comma separated")
    b.set_defaults(func=cmd_ball_extend)
    b = bsub.add_parser("trace", help="u(x0 (1 - t)) on a grid, as CSV")
    b.add_argument("--measure", required=True)
    b.add_argument("--t", required=True)
    b.add_argument("--alpha", type=float, default=0.0)
    b.add_argument("--out")
    b.set_defaults(func=cmd_ball_trace)
    b = bsub.add_parser("mass", help="cap masses on a grid of chordal radii, as CSV")
    b.add_argument("--measure", required=True)
    b.add_argument("--r", required=True)
    b.add_argument("--out")
    b.set_defaults(func=cmd_ball_mass)
    b = bsub.add_parser("project", help="ball trace against the projected half-space trace, as CSV")
    b.add_argument("--measure", required=True)
    b.add_argument("--epsilon", type=float, required=True)
    b.add_argument("--t", required=True)
    b.add_argument("--alpha", type=float, default=0.0)
    b.add_argument("--out")
    b.set_defaults(func=cmd_ball_project)
    return p


_NEGATIVE = re.compile(r"^-[0-9.]")


def _attach_negative_values(argv: Sequence[str]) -> list[str]:
    # argparse reads "--y -10:10:41" as two flags; glue such values to their flag
    out: list[str] = []
    for tok in argv:
        if out and out[-1].startswith("--") and "=" not in out[-1] and _NEGATIVE.match(tok):
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def cli_run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    argv = _attach_negative_values(sys.argv[1:] if argv is None else list(argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad flags and 0 on --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(cli_run())


if __name__ == "__main__":
    main()
