"""Command-line surface: every operation as a reproducible, scriptable
computation emitting CSV or JSON tables, plus the acceptance-suite runner.

Determinism contract: two identical invocations produce byte-identical
output.  Floats are printed with 17 significant digits; CSV quoting follows
RFC 4180; JSON key order is insertion order (stable across runs).
Validation errors exit with code 2.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import warnings

import numpy as np

__all__ = ["main"]

_FMT = "%.17g"


def _fnum(x) -> str:
    if isinstance(x, float):
        return _FMT % x
    return str(x)


class CliError(Exception):
    """User-input error; mapped to exit code 2."""


def _load_config(path: str | None) -> dict:
    """Simple key=value overrides (blank lines and # comments ignored)."""
    cfg = {}
    if path is None:
        return cfg
    try:
        with open(path, encoding="utf-8") as fh:
            for raw in fh:
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise CliError(f"config line not key=value: {line!r}")
                k, v = line.split("=", 1)
                cfg[k.strip()] = v.strip()
    except OSError as e:
        raise CliError(f"cannot read config file: {e}") from e
    return cfg


def _emit(args, header, rows, meta):
    """Write a table as CSV (header + rows) or JSON (config echo + rows)."""
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, quoting=csv.QUOTE_MINIMAL)
        w.writerow(header)
        for row in rows:
            w.writerow([_fnum(x) for x in row])
        text = buf.getvalue()
    else:
        doc = {
            "config": meta.get("config", {}),
            "columns": list(header),
            "rows": [[x if not isinstance(x, float) else float(_FMT % x)
                      for x in row] for row in rows],
        }
        for k, v in meta.items():
            if k != "config":
                doc[k] = v
        text = json.dumps(doc, indent=2) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _config_echo(args, **extra) -> dict:
    cfg = {k: v for k, v in vars(args).items()
           if k not in ("func", "output") and v is not None}
    cfg.update(extra)
    return cfg


def _parse_float_list(text: str, name: str):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as e:
        raise CliError(f"--{name} must be a comma-separated number list") \
            from e


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_v(args):
    from . import painleve as pl

    s = args.s
    if s <= -0.5:
        raise CliError("s must exceed -1/2")
    if args.points < 1 or args.z_min <= 0 or args.z_max < args.z_min:
        raise CliError("need points >= 1 and 0 < z-min <= z-max")
    z_grid = (np.geomspace(args.z_min, args.z_max, args.points)
              if args.points > 1 else np.array([args.z_min]))

    route = args.route
    if route == "exact" and s != 0.0:
        raise CliError("--route exact requires s = 0")
    if route == "bessel" and not (float(s).is_integer() and s >= 1):
        raise CliError("--route bessel requires integer s >= 1")

    sol = None
    if route == "ode":
        sol = pl.solve_painleve(s, max(float(z_grid[-1]) * 1.05, 1.0))

    rows = []
    for z in z_grid:
        z = float(z)
        if route == "exact":
            jet = pl.v_exact_zero(z)
        elif route == "bessel":
            jet = pl.v_bessel_tau(z, int(s))
        elif route == "ode":
            jet = sol.jet(z, 2)
        else:
            jet = pl.v_dispatch(z, s)
        rows.append((z, jet.v, jet.dv[0], jet.dv[1], jet.residual, jet.route))
    _emit(args, ("z", "v", "v_prime", "v_double_prime", "residual", "route"),
          rows, {"config": _config_echo(args)})


def cmd_moment(args):
    from . import moments
    from .charfn import build_charfn

    h = complex(args.h_re, args.h_im)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            table = build_charfn(args.s)
            if args.branch == "auto":
                res = moments.F_moment(args.s, h, table)
            elif args.branch == "derivative":
                res = moments.F_derivative_branch(args.s, int(args.h_re),
                                                  table)
            elif args.branch == "integral":
                res = moments.F_integral_branch(
                    moments.MomentQuery(s=args.s, h=h), table)
            else:
                res = moments.F_kernel_eps(args.s, h, table)
    except ValueError as e:
        raise CliError(str(e)) from e
    rows = [(args.s, args.h_re, args.h_im, res.value.real, res.value.imag,
             res.branch, res.quad_error, res.prefactor)]
    _emit(args, ("s", "h_re", "h_im", "F_re", "F_im", "branch",
                 "quad_error", "prefactor"), rows,
          {"config": _config_echo(args)})


def cmd_density(args):
    from . import density

    if args.s <= -0.5:
        raise CliError("s must exceed -1/2")
    if args.points < 2 or args.x_max <= 0:
        raise CliError("need points >= 2 and x-max > 0")
    x = np.linspace(-args.x_max, args.x_max, args.points)
    grid = density.density_eval(args.s, x_grid=x)
    rows = list(zip(grid.x_grid.tolist(), grid.rho.tolist()))
    _emit(args, ("x", "rho"), rows,
          {"config": _config_echo(args),
           "mass_defect": float(_FMT % grid.mass_defect),
           "min_rho": float(_FMT % grid.min_value)})


def cmd_finite_n(args):
    from . import finite_n

    if args.s <= -0.5:
        raise CliError("s must exceed -1/2")
    if args.n < 1:
        raise CliError("N must be a positive integer")
    if args.h is not None:
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                res = finite_n.f_finite_n(args.n, args.s, args.h)
        except ValueError as e:
            raise CliError(str(e)) from e
        rows = [(args.n, args.s, args.h, res.value.real, res.quad_error)]
        _emit(args, ("N", "s", "h", "F_N", "quad_error"), rows,
              {"config": _config_echo(args)})
        return
    if args.points < 1 or args.z_min <= 0 or args.z_max < args.z_min:
        raise CliError("need points >= 1 and 0 < z-min <= z-max")
    z_grid = (np.geomspace(args.z_min, args.z_max, args.points)
              if args.points > 1 else np.array([args.z_min]))
    rows = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for z in z_grid:
            rows.append((float(z), finite_n.v_finite_n(float(z), args.n,
                                                       args.s)))
    _emit(args, ("z", "v_N"), rows, {"config": _config_echo(args)})


def cmd_convergence(args):
    from . import finite_n
    from . import painleve as pl

    if args.s <= -0.5:
        raise CliError("s must exceed -1/2")
    n_list = [int(x) for x in _parse_float_list(args.n, "n")]
    if any(n < 1 for n in n_list):
        raise CliError("all N must be positive")
    v_lim = pl.v_dispatch(args.z, args.s).v
    rows = []
    prev_err = None
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for n in n_list:
            vn = finite_n.v_finite_n(args.z, n, args.s)
            err = abs(vn - v_lim)
            ratio = (prev_err / err) if prev_err is not None else math.nan
            rows.append((n, vn, v_lim, err, ratio))
            prev_err = err
    _emit(args, ("N", "v_N", "v_limit", "abs_error", "error_ratio"), rows,
          {"config": _config_echo(args)})


def cmd_probe_rule(args):
    from . import moments
    from .charfn import build_charfn

    h_list = _parse_float_list(args.h_list, "h-list")
    try:
        table = build_charfn(float(args.m))
        probe = moments.divergence_probe(args.m, h_list, table)
    except ValueError as e:
        raise CliError(str(e)) from e
    rows = [(h, val) for h, val in probe["rows"]]
    _emit(args, ("h", "F"), rows,
          {"config": _config_echo(args),
           "log_slope": float(_FMT % probe["log_slope"])})


def cmd_accept(args):
    from . import acceptance

    results = ([acceptance.run_criterion(args.only)] if args.only
               else acceptance.run_all())
    rows = [(r.ident, "PASS" if r.passed else "FAIL", r.description, r.detail)
            for r in results]
    if args.format == "json":
        _emit(args, ("id", "status", "description", "detail"), rows,
              {"config": _config_echo(args),
               "all_passed": all(r.passed for r in results)})
    else:
        out = sys.stdout
        for ident, status, desc, detail in rows:
            out.write(f"{ident} {status}  {desc}\n    {detail}\n")
        n_pass = sum(r.passed for r in results)
        out.write(f"{n_pass}/{len(results)} criteria passed\n")
    return 0 if all(r.passed for r in results) else 1


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="cuemoments",
        description="sigma-Painleve III' solver, CUE joint-moment "
                    "coefficients, finite-N Hankel determinants, and the "
                    "Hua-Pickrell density")
    p.add_argument("--config", help="key=value file with overrides")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--output", help="write to file instead of stdout")

    sp = sub.add_parser("v", help="v(z;s) with derivatives and residual")
    sp.add_argument("--s", type=float, required=True)
    sp.add_argument("--z-min", type=float, default=0.1)
    sp.add_argument("--z-max", type=float, default=10.0)
    sp.add_argument("--points", type=int, default=50)
    sp.add_argument("--route", choices=("auto", "ode", "bessel", "exact"),
                    default="auto")
    common(sp)
    sp.set_defaults(func=cmd_v)

    sp = sub.add_parser("moment", help="leading coefficient F(s,h)")
    sp.add_argument("--s", type=float, required=True)
    sp.add_argument("--h-re", type=float, required=True)
    sp.add_argument("--h-im", type=float, default=0.0)
    sp.add_argument("--branch",
                    choices=("auto", "derivative", "integral", "kernel-eps"),
                    default="auto")
    common(sp)
    sp.set_defaults(func=cmd_moment)

    sp = sub.add_parser("density", help="Hua-Pickrell density rho^(s)")
    sp.add_argument("--s", type=float, required=True)
    sp.add_argument("--x-max", type=float, default=10.0)
    sp.add_argument("--points", type=int, default=201)
    common(sp)
    sp.set_defaults(func=cmd_density)

    sp = sub.add_parser("finite-n",
                        help="finite-N scaled log-derivative v_N or moment "
                             "F_N(s,h)")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--s", type=float, required=True)
    sp.add_argument("--z-min", type=float, default=0.1)
    sp.add_argument("--z-max", type=float, default=10.0)
    sp.add_argument("--points", type=int, default=50)
    sp.add_argument("--h", type=float,
                    help="compute F_N(s,h) instead of the v_N table")
    common(sp)
    sp.set_defaults(func=cmd_finite_n)

    sp = sub.add_parser("convergence",
                        help="v_N(z) -> v(z) error table over an N list")
    sp.add_argument("--s", type=float, required=True)
    sp.add_argument("--z", type=float, required=True)
    sp.add_argument("--n", type=str, required=True,
                    help="comma-separated N values, e.g. 10,20,40")
    common(sp)
    sp.set_defaults(func=cmd_convergence)

    sp = sub.add_parser("probe-rule",
                        help="divergence probe of F(m,h) near h = m + 1/2")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--h-list", type=str, required=True)
    common(sp)
    sp.set_defaults(func=cmd_probe_rule)

    sp = sub.add_parser("accept", help="run the acceptance suite")
    sp.add_argument("--only", help="run a single criterion, e.g. acc07")
    common(sp)
    sp.set_defaults(func=cmd_accept)

    return p


def main(argv=None) -> int:
    # thread count for BLAS-backed steps; recorded only, never affects values
    os.environ.setdefault("OMP_NUM_THREADS",
                          os.environ.get("CUEMOMENTS_THREADS", "1"))
    if argv is None:
        argv = sys.argv[1:]
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        # config file values fill in anything not given explicitly on the
        # command line
        for k, v in _load_config(args.config).items():
            key = k.replace("-", "_")
            if f"--{k.replace('_', '-')}" in argv or not hasattr(args, key):
                continue
            try:
                typed = float(v) if "." in v or "e" in v.lower() else int(v)
            except ValueError:
                typed = v
            setattr(args, key, typed)
        rc = args.func(args)
        return 0 if rc is None else rc
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
