"""Command-line front end: ``winding {prob,green,mc,verify,grid}``.

Exit codes: 0 success, 2 input error, 3 numerical inconsistency.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys
from typing import Sequence

import numpy as np

from . import __version__
from .closed_forms import green1_closed, schramm_probability, simmons_cardy_two_point
from .core_cft import BoundaryFrame, check_kappa
from .coulomb_gas import ConvergenceError
from .numerics import ContourDeformationRequired, ExtrapolationError
from .winding import InconsistencyError, WindingPattern, compute_weights, pattern_probability

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3
LIMITS = {"prob": 16, "green": 2}
_COMPLEX = re.compile(r"[0-9.eE+\-]*i?")


class InputError(ValueError):
    pass


def parse_complex(text: str) -> complex:
    """Parse ``a+bi`` literals such as ``1+1i``, ``-0.5+2i``, ``2i`` or ``3``."""
    s = text.strip().replace(" ", "").lower()
    if not s or not _COMPLEX.fullmatch(s):
        raise InputError(f"cannot parse complex number {text!r}")
    try:
        return complex(s.replace("i", "j"))
    except ValueError:
        raise InputError(f"cannot parse complex number {text!r}") from None


def parse_real_or_inf(text: str) -> float:
    s = text.strip().lower()
    if s in ("inf", "+inf"):
        return math.inf
    try:
        return float(s)
    except ValueError:
        raise InputError(f"cannot parse boundary point {text!r}") from None


def parse_frame(text: str) -> BoundaryFrame:
    parts = text.split(",")
    if len(parts) != 2:
        raise InputError("frame must be 'x1,x2'")
    try:
        return BoundaryFrame(parse_real_or_inf(parts[0]), parse_real_or_inf(parts[1]))
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _threads(args) -> int:
    if args.threads:
        return max(1, args.threads)
    env = os.environ.get("WINDING_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise InputError("WINDING_THREADS must be an integer") from None
    return 1


def _c(z: complex) -> str:
    return f"{z.real:.17g}{z.imag:+.17g}i"


def _provenance(args, **extra) -> dict:
    prov = {"command": args.command, "version": __version__, "kappa": args.kappa, "order": args.order,
            "frame": [_inf(args.frame.x1), _inf(args.frame.x2)]}
    prov.update(extra)
    return prov


def _inf(x: float):
    return "inf" if math.isinf(x) else x


# -- commands ------------------------------------------------------------------

def cmd_prob(args):
    pts = args.points
    wv, err = compute_weights(pts, args.frame, args.kappa, args.order, threads=_threads(args))
    n = len(pts)
    # the transform mixes all correlators, so each weight inherits their summed error
    e = float(np.sum(err)) / 2 ** n
    results = []
    for mask in range(1 << n):
        pat = WindingPattern(mask, n)
        results.append({"pattern": mask, "separated": pat.indices(),
                        "probability": pattern_probability(wv, pat), "error": e})
    out = {"results": results, "p_separated": results[-1]["probability"],
           "points": [_c(z) for z in pts]}
    return out, _provenance(args)


def cmd_green(args):
    from .green import calibrate_c31, green1, green2

    pts = args.points
    if len(pts) == 1:
        g = green1(pts[0], args.frame, method=args.method, order=args.order)
    else:
        g = green2(pts[0], pts[1], args.frame, method=args.method)
    cal = calibrate_c31().c31_squared if args.method == "extrapolation" else None
    res = {"points": [_c(z) for z in pts], "value": g.value, "error": g.error_estimate, "method": g.method}
    return {"results": [res]}, _provenance(args, c31_squared=cal)


def cmd_mc(args):
    from .sle_mc import McConfig, estimate_near_passage, estimate_patterns

    cfg = McConfig(kappa=args.kappa, n_samples=args.samples, seed=args.seed, dt_scale=args.dt_scale,
                   workers=_threads(args))
    if args.eps:
        if len(args.points) != 1:
            raise InputError("near-passage runs take exactly one point")
        ests = estimate_near_passage(args.points[0], args.eps, cfg)
        results = [{"eps": e, "frequency": s.mean, "error": s.std_err, "n": s.n} for e, s in zip(args.eps, ests)]
    else:
        ests = estimate_patterns(args.points, cfg)
        results = [{"pattern": m, "separated": WindingPattern(m, len(args.points)).indices(),
                    "frequency": s.mean, "error": s.std_err, "n": s.n, "excluded": s.excluded}
                   for m, s in enumerate(ests)]
    return {"results": results, "points": [_c(z) for z in args.points]}, _provenance(
        args, seed=args.seed, samples=args.samples, dt_scale=args.dt_scale)


def _check(name, value, target, tol, kind="abs"):
    diff = abs(value - target) if kind == "abs" else abs(value - target) / abs(target)
    return {"check": name, "value": value, "target": target, "tolerance": tol, "metric": kind,
            "pass": bool(diff <= tol)}


def verify_closedform(args) -> list[dict]:
    from .coulomb_gas import h1_cg
    from .closed_forms import h1_closed
    from .winding import left_passage

    rng = np.random.default_rng(args.seed)
    out = [_check("schramm(1+i)", schramm_probability(1 + 1j), 0.5 + 0.5 / math.sqrt(2), 1e-10)]
    for _ in range(5):
        z = complex(rng.uniform(-2, 2), rng.uniform(0.2, 2))
        out.append(_check(f"h1_cg({_c(z)})", h1_cg(z).real, h1_closed(z).real, 1e-8))
    for _ in range(3):
        z = complex(rng.uniform(-2, 2), rng.uniform(0.3, 2))
        w = complex(rng.uniform(-2, 2), rng.uniform(0.3, 2))
        out.append(_check(f"left_passage({_c(z)},{_c(w)})", left_passage([z, w], order=args.order),
                          simmons_cardy_two_point(z, w), 1e-6))
    return out


def verify_mc(args) -> list[dict]:
    from .sle_mc import McConfig, estimate_patterns

    cfg = McConfig(n_samples=args.samples, seed=args.seed, workers=_threads(args))
    out = []
    for z in (1 + 1j, -0.5 + 1j):
        est = estimate_patterns([z], cfg)[1]
        out.append(_check(f"mc schramm({_c(z)}) [3 sigma]", est.mean, schramm_probability(z), 3 * est.std_err))
    est = estimate_patterns([1j, 2j], cfg)[3]
    out.append(_check("mc simmons-cardy(i,2i) [3 sigma]", est.mean, simmons_cardy_two_point(1j, 2j),
                      3 * est.std_err))
    return out


def cmd_verify(args):
    checks = []
    if args.suite in ("closedform", "all"):
        checks += verify_closedform(args)
    if args.suite in ("mc", "all"):
        checks += verify_mc(args)
    ok = all(c["pass"] for c in checks)
    return {"results": checks, "all_pass": ok}, _provenance(args, seed=args.seed, suite=args.suite)


def cmd_grid(args):
    xs = np.linspace(args.xmin, args.xmax, args.nx)
    ys = np.linspace(args.ymin, args.ymax, args.ny)
    if args.ymin <= 0:
        raise InputError("grid must lie in the upper half-plane (ymin > 0)")
    rows = []
    for y in ys:
        for x in xs:
            z = complex(x, y)
            if args.grid_command == "green":
                from .green import green1

                if args.method == "closed":
                    val, err = green1_closed(z, args.frame), 0.0
                else:
                    g = green1(z, args.frame, method=args.method, order=args.order)
                    val, err = g.value, g.error_estimate
            else:
                wv, e = compute_weights([z], args.frame, args.kappa, args.order)
                val, err = pattern_probability(wv, WindingPattern(1, 1)), float(e.sum()) / 2
            rows.append({"x": float(x), "y": float(y), "value": float(val), "error": float(err)})
    return {"results": rows}, _provenance(args, grid=[args.xmin, args.xmax, args.ymin, args.ymax, args.nx, args.ny],
                                          grid_command=args.grid_command)


# -- output ----------------------------------------------------------------------

def _scalar(v):
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (list, tuple)):
        return " ".join(str(x) for x in v)
    return str(v)


def render(payload: dict, provenance: dict, fmt: str) -> str:
    if fmt == "json":
        doc = dict(payload)
        doc["provenance"] = provenance
        return json.dumps(doc, sort_keys=True, indent=2, allow_nan=False) + "\n"
    rows = payload["results"]
    buf = io.StringIO()
    for key in sorted(provenance):
        buf.write(f"# {key}: {json.dumps(provenance[key], sort_keys=True)}\n")
    if rows:
        cols = list(rows[0].keys())
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(cols)
        for r in rows:
            writer.writerow([_scalar(r[c]) for c in cols])
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--frame", type=parse_frame, default=BoundaryFrame(0.0, math.inf))
    common.add_argument("--kappa", type=float, default=8 / 3)
    common.add_argument("--order", type=int, default=48)
    common.add_argument("--output", "-o", default="-")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--threads", type=int, default=0)
    common.add_argument("--seed", type=int, default=0)

    p = argparse.ArgumentParser(prog="winding", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def points_arg(sp):
        sp.add_argument("--points", nargs="+", type=parse_complex, required=True)

    sp = sub.add_parser("prob", parents=[common], help="winding-pattern probabilities")
    points_arg(sp)
    sp = sub.add_parser("green", parents=[common], help="one- or two-point Green's function")
    points_arg(sp)
    sp.add_argument("--method", choices=("extrapolation", "direct_block"), default="extrapolation")
    sp = sub.add_parser("mc", parents=[common], help="Monte Carlo Loewner estimates")
    points_arg(sp)
    sp.add_argument("--samples", type=int, default=100_000)
    sp.add_argument("--dt-scale", type=float, default=0.01)
    sp.add_argument("--eps", nargs="+", type=float, help="near-passage radii (one point only)")
    sp = sub.add_parser("verify", parents=[common], help="cross-validation report")
    sp.add_argument("--suite", choices=("closedform", "mc", "all"), default="closedform")
    sp.add_argument("--samples", type=int, default=100_000)
    sp = sub.add_parser("grid", parents=[common], help="values on a rectangular grid (CSV-friendly)")
    sp.add_argument("--command", dest="grid_command", choices=("green", "prob"), default="green")
    sp.add_argument("--method", choices=("closed", "direct_block", "extrapolation"), default="direct_block")
    for name, default in (("xmin", -2.0), ("xmax", 2.0), ("ymin", 0.2), ("ymax", 2.0)):
        sp.add_argument(f"--{name}", type=float, default=default)
    sp.add_argument("--nx", type=int, default=41)
    sp.add_argument("--ny", type=int, default=41)
    return p


COMMANDS = {"prob": cmd_prob, "green": cmd_green, "mc": cmd_mc, "verify": cmd_verify, "grid": cmd_grid}


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        check_kappa(args.kappa)
        limit = LIMITS.get(args.command)
        if limit is not None and len(args.points) > limit:
            raise InputError(f"{args.command} accepts at most {limit} points")
        if args.command == "grid" and args.grid_command == "green" and args.method != "closed" and args.kappa != 8 / 3:
            raise InputError("Green's functions are available at kappa = 8/3 only")
        payload, prov = COMMANDS[args.command](args)
        text = render(payload, prov, args.format)
    except (InconsistencyError, ExtrapolationError, ConvergenceError, ContourDeformationRequired) as exc:
        print(f"winding: numerical inconsistency: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"winding: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    if args.command == "verify" and not payload["all_pass"]:
        return EXIT_NUMERIC
    return EXIT_OK


def main() -> None:
    sys.exit(run())
