"""Command line front end.

Every command writes one table (CSV or JSON, floats with 17 significant
digits).  With ``--out PATH`` (or ``$WHITEHEAD_VC_OUTPUT_DIR`` set) the table
goes to a file with a ``.meta.json`` sidecar recording the command, the
configuration, versions, precision, tolerances and wall time; otherwise it is
printed to stdout.

Exit codes: 0 success, 1 numerical failure, 2 configuration error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import platform
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, checks, geometry, jones, saddle, tv
from ._backend import BACKEND
from .potential import BranchCutError, PotentialParams, grad_phi, phi
from .specfun import ConvergenceError, DomainError, RootData

OUTPUT_DIR_ENV = "WHITEHEAD_VC_OUTPUT_DIR"
DEFAULT_SEED = 20240601
JONES_COLUMNS = ["N", "r", "M1", "M2", "re_J", "im_J", "log_abs_J", "growth_estimate"]


class ConfigError(ValueError):
    pass


def parse_range(text: str) -> list[int]:
    """``"5"``, ``"100,200,400"`` or inclusive ``"100:800:100"``."""
    try:
        if ":" in text:
            parts = [int(p) for p in text.split(":")]
            if len(parts) == 2:
                parts.append(1)
            lo, hi, step = parts
            if step <= 0:
                raise ConfigError("range step must be positive")
            vals = list(range(lo, hi + 1, step))
        else:
            vals = [int(p) for p in text.split(",") if p.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad integer range {text!r}") from exc
    if not vals:
        raise ConfigError(f"empty range {text!r}")
    return vals


def parse_complex_list(text: str) -> list[complex]:
    try:
        return [complex(p.replace(" ", "")) for p in text.split(",")]
    except ValueError as exc:
        raise ConfigError(f"bad coordinate list {text!r}") from exc


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


def _spec(args) -> jones.ChainSpec:
    if args.link == "wl":
        return jones.WL
    return jones.ChainSpec(args.a, args.c, args.d)


def _params(args, sign=None) -> PotentialParams:
    s = _spec(args)
    return PotentialParams(args.sign if sign is None else sign, args.s1, args.s2, s.a, s.c, s.d)


# ---------------------------------------------------------------------------
# commands; each returns (columns, rows, extra-metadata)


def _coloring(args, root):
    if args.s1 is not None or args.s2 is not None:
        return jones.Coloring.from_ratios(args.s1 if args.s1 is not None else 1.0,
                                          args.s2 if args.s2 is not None else 1.0, root)
    M1 = root.N if args.M1 is None else args.M1
    M2 = root.N if args.M2 is None else args.M2
    return jones.Coloring(M1, M2)


def cmd_jones(args):
    spec = _spec(args)
    rows = []
    for N in parse_range(args.N):
        root = RootData(N)
        col = _coloring(args, root)
        col.check(root)
        if args.precision == "extended":
            import mpmath as mp
            val = (jones.jones_wl(col, root, "extended", args.dps) if spec.is_wl
                   else jones.jones_chain(spec, col, root, "extended", args.dps))
            la = float(mp.log(abs(val)))
            re, im = float(val.real), float(val.imag)
        elif args.precision == "auto":
            la = jones.log_abs_jones(spec, col, root, "auto", args.dps)
            if la < 700.0:
                v = (jones.jones_wl(col, root, "auto", args.dps) if spec.is_wl
                     else jones.jones_chain(spec, col, root, "auto", args.dps))
                re, im = v.real, v.imag
            else:
                re = im = math.nan
        else:
            sc = (jones.jones_wl_scaled(col, root) if spec.is_wl
                  else jones.jones_chain_scaled(spec, col, root))
            la = sc.log_abs
            try:
                v = sc.to_complex()
                re, im = v.real, v.imag
            except OverflowError:
                re = im = math.nan
        rows.append([N, root.r, col.M1, col.M2, re, im, la, 2 * math.pi * la / root.half_level])
    return JONES_COLUMNS, rows, {}


def cmd_asymptote(args):
    spec = _spec(args)
    Ns = parse_range(args.N)
    pts, rows = [], []
    for N in Ns:
        root = RootData(N)
        col = _coloring(args, root)
        la = jones.log_abs_jones(spec, col, root, args.precision, args.dps)
        pts.append((N, la))
        rows.append([N, root.r, col.M1, col.M2, math.nan, math.nan, la,
                     2 * math.pi * la / root.half_level])
    fit = jones.growth_rate(pts)
    extra = {"fit": {"alpha": fit.alpha, "beta": fit.beta, "gamma": fit.gamma,
                     "residual": fit.residual, "volume_estimate": fit.volume_estimate}}
    print(f"volume estimate 2*pi*alpha = {fit.volume_estimate:.12f}, beta = {fit.beta:.6f}",
          file=sys.stderr)
    return JONES_COLUMNS, rows, extra


def cmd_potential(args):
    p = _params(args)
    z = np.array(parse_complex_list(args.z))
    val = phi(p, z)
    g = grad_phi(p, z)
    cols = ["sign", "s1", "s2", "z", "re_phi", "im_phi", "grad_norm", "bw_volume", "differential_residual"]
    zs = ";".join(fmt(complex(v)) for v in z)
    return cols, [[p.sign, float(np.real(p.s1)), float(np.real(p.s2)), zs, val.real, val.imag,
                   float(np.linalg.norm(g)), geometry.bw_volume(p, z),
                   geometry.differential_residual(p, z)]], {}


def _solve(args, p):
    if args.z0:
        return saddle.solve_critical(p, parse_complex_list(args.z0), args.tol)
    return saddle.continue_path(p, (p.s1, p.s2), args.steps, args.tol).final


def cmd_solve(args):
    p = _params(args)
    res = _solve(args, p)
    cols = ["sign", "s1", "s2"] + [f"re_z{k + 1}" for k in range(p.dim)] + \
        [f"im_z{k + 1}" for k in range(p.dim)] + ["residual", "re_det", "im_det", "volume", "cs_part"]
    row = [p.sign, float(np.real(p.s1)), float(np.real(p.s2))] + list(res.z_star.real) + \
        list(res.z_star.imag) + [res.residual_norm, res.hess_det.real, res.hess_det.imag,
                                 res.volume, res.cs_part]
    return cols, [row], {"iterations": res.iterations}


def cmd_volume(args):
    p = _params(args)
    res = _solve(args, p)
    rep = geometry.gluing_residuals(geometry.shapes_from_z(p, res.z_star))
    V = geometry.bw_volume(p, res.z_star)
    cols = ["sign", "s1", "s2", "volume_from_phi", "bw_volume", "difference",
            "max_edge_residual", "meridian_error", "longitude_error"]
    return cols, [[p.sign, float(np.real(p.s1)), float(np.real(p.s2)), res.volume, V,
                   res.volume - V, rep.max_edge_residual, rep.meridian_error,
                   rep.longitude_error]], {}


def cmd_tv(args):
    spec = _spec(args)
    rs = parse_range(args.r)
    results = [tv.diagonal_term(spec, r) if args.diagonal else tv.tv_from_jones(spec, r) for r in rs]
    rows = [[t.r, t.log_value, t.log_scaled, t.complete] for t in results]
    extra = {}
    if len(rs) >= 4:
        fit = tv.fit_log_tv(rs, [t.log_value for t in results])
        extra["fit"] = {"alpha": fit.alpha, "beta": fit.beta, "gamma": fit.gamma,
                        "volume_estimate": fit.volume_estimate}
        print(f"volume estimate 2*pi*alpha = {fit.volume_estimate:.12f}", file=sys.stderr)
    return ["r", "log_TV", "log_scaled", "complete"], rows, extra


def cmd_audit(args):
    spec = _spec(args)
    rows = []
    for r in parse_range(args.r):
        a = tv.upper_bound_audit(spec, r, args.allowed_C)
        rows.append([r, a.bound, a.max_scaled, a.argmax[0], a.argmax[1], a.fitted_C,
                     a.allowed_C, a.passed])
    return ["r", "bound", "max_scaled", "argmax_M1", "argmax_M2", "fitted_C", "allowed_C",
            "passed"], rows, {}


def cmd_check(args):
    names = args.only.split(",") if args.only else None
    if names:
        unknown = [n for n in names if n not in checks.CHECKS]
        if unknown:
            raise ConfigError(f"unknown checks {unknown}; available: {sorted(checks.CHECKS)}")
    results = checks.run_checks(args.seed, names)
    for r in results:
        print(r.line(), file=sys.stderr)
    rows = [[r.name, r.passed, r.value, r.tolerance] for r in results]
    return ["check", "passed", "value", "tolerance"], rows, {"all_passed": all(r.passed for r in results)}


COMMANDS = {
    "jones": cmd_jones, "potential": cmd_potential, "solve": cmd_solve, "volume": cmd_volume,
    "tv": cmd_tv, "asymptote": cmd_asymptote, "audit": cmd_audit, "check": cmd_check,
}


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="whitehead-vc", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--link", choices=["wl", "chain"], default="wl")
    common.add_argument("--a", type=int, default=0, help="full twists (chain)")
    common.add_argument("--c", type=int, default=1, help="clasps (chain)")
    common.add_argument("--d", type=int, default=0, help="mirror clasps (chain)")
    common.add_argument("--out", type=Path, help="output file (sidecar gets .meta.json)")
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("--precision", choices=list(jones.PRECISIONS), default="auto",
                        help="auto repeats heavily cancelling sums in extended precision")
    common.add_argument("--dps", type=int, default=50, help="digits for extended precision")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sub = ap.add_subparsers(dest="command", required=True)

    def with_colors(p):
        p.add_argument("--N", default="10", help="N, list or lo:hi:step")
        p.add_argument("--M1", type=int, help="belt color (default N)")
        p.add_argument("--M2", type=int, help="clasp color (default N)")
        p.add_argument("--s1", type=float, help="belt ratio; colors round(s (N + 1/2))")
        p.add_argument("--s2", type=float, help="clasp ratio")

    def with_s(p):
        p.add_argument("--s1", type=float, default=1.0)
        p.add_argument("--s2", type=float, default=1.0)
        p.add_argument("--sign", type=int, choices=[1, -1], default=1)

    def with_solver(p):
        p.add_argument("--steps", type=int, default=10)
        p.add_argument("--tol", type=float, default=saddle.DEFAULT_TOL)
        p.add_argument("--z0", help="start point z1,z2,... (skips continuation)")

    with_colors(sub.add_parser("jones", parents=[common], help="evaluate colored Jones values"))
    with_colors(sub.add_parser("asymptote", parents=[common], help="growth-rate fit over N"))
    p = sub.add_parser("potential", parents=[common], help="evaluate the potential at z")
    with_s(p)
    p.add_argument("--z", required=True, help="coordinates z1,z2,... (complex allowed)")
    for name, hlp in (("solve", "critical point"), ("volume", "volumes and gluing residuals")):
        p = sub.add_parser(name, parents=[common], help=hlp)
        with_s(p)
        with_solver(p)
    p = sub.add_parser("tv", parents=[common], help="Turaev-Viro invariants")
    p.add_argument("--r", default="5,7,9", help="odd r values")
    p.add_argument("--diagonal", action="store_true", help="only the (N, N) term")
    p = sub.add_parser("audit", parents=[common], help="per-color upper bound scan")
    p.add_argument("--r", default="101")
    p.add_argument("--allowed-C", dest="allowed_C", type=float, default=6 * math.pi)
    p = sub.add_parser("check", parents=[common], help="run the identity checks")
    p.add_argument("--only", help="comma separated subset of checks")
    return ap


def render(columns, rows, form: str) -> str:
    if form == "json":
        recs = [{c: (fmt(v) if isinstance(v, (float, np.floating)) and not math.isfinite(v) else v)
                 for c, v in zip(columns, row)} for row in rows]
        return json.dumps(recs, indent=1, default=_json_default) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def _json_default(o):
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating,)):
        return float(o)
    if isinstance(o, (np.bool_,)):
        return bool(o)
    if isinstance(o, complex):
        return [o.real, o.imag]
    return str(o)


def _versions() -> dict:
    import mpmath

    return {"whitehead_vc": __version__, "python": platform.python_version(),
            "numpy": np.__version__, "mpmath": mpmath.__version__, "backend": BACKEND}


def _tolerances(args) -> dict:
    from .specfun import DEFAULT_QUADRATURE as q

    return {"newton_tol": getattr(args, "tol", saddle.DEFAULT_TOL),
            "degeneracy_floor": saddle.DEGENERACY_FLOOR,
            "quadrature_target_abs_error": q.target_abs_error,
            "quadrature_tail_cutoff": q.tail_cutoff}


def _target(args) -> Path | None:
    if args.out is not None:
        return args.out
    env = os.environ.get(OUTPUT_DIR_ENV)
    if env:
        return Path(env) / f"{args.command}.{args.format}"
    return None


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    t0 = time.perf_counter()
    try:
        columns, rows, extra = COMMANDS[args.command](args)
    except (ConfigError, ValueError) as exc:
        if isinstance(exc, (DomainError,)):
            print(f"numerical failure: {exc}", file=sys.stderr)
            return 1
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except (saddle.SolverError, ConvergenceError, OverflowError, BranchCutError,
            ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 1
    body = render(columns, rows, args.format)
    target = _target(args)
    if target is None:
        sys.stdout.write(body)
    else:
        try:
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_text(body)
            config = {k: (str(v) if isinstance(v, Path) else v) for k, v in vars(args).items()}
            meta = {"command": args.command, "config": config, "versions": _versions(),
                    "precision": args.precision, "tolerances": _tolerances(args),
                    "seed": args.seed, "wall_time_s": time.perf_counter() - t0, **extra}
            Path(str(target) + ".meta.json").write_text(json.dumps(meta, indent=1, default=_json_default) + "\n")
        except OSError as exc:
            print(f"configuration error: cannot write {target}: {exc}", file=sys.stderr)
            return 2
    if args.command == "check" and not extra.get("all_passed", True):
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
