"""Command-line interface: ``tacnode {eval,converge,selftest,arctic,osc}``.

Every floating value is printed with 17 significant digits; identical
invocations give byte-identical output.  The default quadrature tolerance
comes from ``--tol`` or the ``TACNODE_TOL`` environment variable.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import subprocess
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from . import arctic as A
from .asymptotics import (RUNGS, SLOPE_WINDOW, convergence_study, excluded_sector_study,
                          oscillation_report)
from .contours import QuadratureSpec
from .dtac import DTacParams, dtac_general, dtac_rho0
from .errors import (AccuracyError, ExcludedSectorError, InvalidParameterError,
                     UnsupportedSizeError)
from .gue import gue_kernel
from .limits import cusp_kernel, excluded, tcusp_kernel

KERNELS = ("dtac-general", "dtac-rho0", "tcusp", "cusp", "gue")
EVAL_HEADER = ["tau1", "tau2", "xi1", "xi2", "value", "err_estimate", "reason"]
DEFAULT_TOL = 1e-10
EXIT_FAIL = 1
EXIT_USAGE = 2


def fmt(x):
    """17 significant digits; empty for None."""
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    return f"{x:.17g}"


def _jnum(x):
    if x is None:
        return None
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return int(x)
    x = float(x)
    return None if not math.isfinite(x) else float(f"{x:.17g}")


def parse_range(text):
    """'a' or 'a..b' (inclusive integers)."""
    parts = text.split("..")
    try:
        if len(parts) == 1:
            return [int(parts[0])]
        if len(parts) == 2:
            a, b = int(parts[0]), int(parts[1])
            if b < a:
                raise ValueError
            return list(range(a, b + 1))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected an integer or a range a..b, got {text!r}")


def parse_grid(text):
    """'min:max:step' -> list of floats, endpoints inclusive; a single number is a one-point grid."""
    parts = text.split(":")
    try:
        vals = [float(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}") from None
    if len(vals) == 1:
        return vals
    if len(vals) != 3 or vals[2] <= 0 or vals[1] < vals[0]:
        raise argparse.ArgumentTypeError("grid must be min:max:step with step > 0 and max >= min")
    lo, hi, st = vals
    n = int(math.floor((hi - lo) / st + 1e-9)) + 1
    return [round(lo + k * st, 12) for k in range(n)]


def default_tol():
    env = os.environ.get("TACNODE_TOL")
    if env:
        try:
            t = float(env)
            if t > 0:
                return t
        except ValueError:
            pass
        raise SystemExit(f"tacnode: TACNODE_TOL must be a positive number, got {env!r}")
    return DEFAULT_TOL


def version_string():
    try:
        out = subprocess.run(["git", "describe", "--always", "--dirty", "--tags"],
                             cwd=Path(__file__).resolve().parent, capture_output=True,
                             text=True, timeout=5)
        if out.returncode == 0 and out.stdout.strip():
            return f"{__version__}+{out.stdout.strip()}"
    except (OSError, subprocess.SubprocessError):
        pass
    return __version__


# ---------------------------------------------------------------------------
# eval

def _eval_row(job):
    kernel, cfg, t1, t2, x1, x2 = job
    spec = QuadratureSpec(abs_tol=cfg["tol"])
    try:
        if kernel == "dtac-rho0":
            val = dtac_rho0(cfg["r"], t1, x1, t2, x2, spec)
        elif kernel == "dtac-general":
            val = dtac_general(DTacParams(cfg["r"], cfg["rho"], cfg["beta"]), t1, x1, t2, x2)
        elif kernel == "tcusp":
            if excluded(t1, t2):
                return (None, None, "excluded_sector")
            val = tcusp_kernel(t1, x1, t2, x2, spec)
        elif kernel == "cusp":
            val = cusp_kernel(t1, x1, t2, x2, form="double", spec=spec)
        else:
            val = gue_kernel(cfg["r"], x1, x2)
    except ExcludedSectorError:
        return (None, None, "excluded_sector")
    except AccuracyError:
        return (None, None, "accuracy_failure")
    except InvalidParameterError:
        return (None, None, "invalid_parameter")
    val = complex(val)
    if abs(val.imag) > 1e-8 * max(1.0, abs(val.real)):
        return (None, None, "complex_value")
    return (val.real, cfg["tol"], "")


def _eval_metadata(args, kernel):
    return {"schema": "tacnode.eval/1", "version": version_string(), "kernel": kernel,
            "r": args.r, "rho": args.rho, "beta": args.beta,
            "quadrature": {"abs_tol": args.tol, "nodes_per_unit": QuadratureSpec().nodes_per_unit,
                           "max_panels": QuadratureSpec().max_panels,
                           "rel_floor": QuadratureSpec().rel_floor},
            "err_estimate": "requested absolute quadrature tolerance"}


def cmd_eval(args):
    kernel = args.kernel
    if kernel == "dtac-general" and args.r > 3:
        raise UnsupportedSizeError("dtac-general needs r <= 3")
    if kernel in ("dtac-rho0", "gue") and args.r < 1:
        raise InvalidParameterError("r must be >= 1")
    taus = [(0, 0)] if kernel == "gue" else [(a, b) for a in args.tau1 for b in args.tau2]
    xs = args.xi_grid
    cfg = {"r": args.r, "rho": args.rho, "beta": args.beta, "tol": args.tol}
    jobs = [(kernel, cfg, a, b, x1, x2) for a, b in taus for x1 in xs for x2 in xs]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as ex:
            results = list(ex.map(_eval_row, jobs))
    else:
        results = [_eval_row(j) for j in jobs]
    rows = []
    for (_, _, a, b, x1, x2), (v, e, why) in zip(jobs, results):
        if kernel == "gue":
            a = b = None
        rows.append({"tau1": a, "tau2": b, "xi1": x1, "xi2": x2, "value": v,
                     "err_estimate": e, "reason": why or None})
    meta = _eval_metadata(args, kernel)
    if args.format == "json":
        text = json.dumps({**meta, "rows": [{k: (_jnum(v) if k != "reason" else v)
                                              for k, v in row.items()} for row in rows]},
                          indent=2, sort_keys=True) + "\n"
    else:
        buf = io.StringIO()
        for k in sorted(meta):
            buf.write(f"# {k}={json.dumps(meta[k], sort_keys=True)}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(EVAL_HEADER)
        for row in rows:
            w.writerow([fmt(row[k]) if k != "reason" else (row[k] or "") for k in EVAL_HEADER])
        text = buf.getvalue()
    return text, 0


# ---------------------------------------------------------------------------
# converge

CONVERGE_HEADER = ["tau1", "tau2", "xi1", "xi2", "eps", "r", "value", "limit", "abs_err",
                   "slope", "monotone", "passed"]


def cmd_converge(args):
    spec = QuadratureSpec(abs_tol=args.tol)
    rs = args.rungs
    reports = []
    for a in args.tau1:
        for b in args.tau2:
            for eps in args.epsilon:
                if excluded(a, b):
                    vals, cauchy = excluded_sector_study(a, b, args.xi1, args.xi2, eps, rs,
                                                         spec=spec)
                    reports.append(("excluded", a, b, eps, vals, cauchy))
                else:
                    rep = convergence_study(a, b, args.xi1, args.xi2, eps, rs, spec)
                    reports.append(("limit", a, b, eps, rep, None))
    failed = any(kind == "limit" and not rep.passed for kind, _, _, _, rep, _ in reports)
    if args.format == "json":
        items = []
        for kind, a, b, eps, rep, cauchy in reports:
            if kind == "limit":
                items.append(json.loads(rep.to_json()))
            else:
                items.append({"tau1": a, "tau2": b, "xp1": args.xi1, "xp2": args.xi2, "eps": eps,
                              "rs": list(rs), "values": [_jnum(v) for v in rep],
                              "limit": None, "reason": "excluded_sector", "cauchy": cauchy})
        text = json.dumps({"schema": "tacnode.converge/1", "version": version_string(),
                           "slope_window": list(SLOPE_WINDOW), "studies": items},
                          indent=2, sort_keys=True) + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CONVERGE_HEADER)
        for kind, a, b, eps, rep, cauchy in reports:
            if kind == "limit":
                for r, v, e in zip(rep.rs, rep.values, rep.abs_err):
                    w.writerow([a, b, fmt(args.xi1), fmt(args.xi2), eps, r, fmt(v),
                                fmt(rep.limit), fmt(e), fmt(rep.slope),
                                str(rep.monotone).lower(), str(rep.passed).lower()])
            else:
                for r, v in zip(rs, rep):
                    w.writerow([a, b, fmt(args.xi1), fmt(args.xi2), eps, r, fmt(v), "", "", "",
                                "", "excluded_sector"])
        text = buf.getvalue()
    return text, EXIT_FAIL if failed else 0


# ---------------------------------------------------------------------------
# selftest

def cmd_selftest(args):
    from . import selftest
    results = selftest.run()
    lines = [f"{'PASS' if c.passed else 'FAIL'} {c.name} err={c.error:.3g} tol={c.tol:.0e}"
             for c in results]
    n_ok = sum(c.passed for c in results)
    lines.append(f"{n_ok}/{len(results)} checks passed")
    return "\n".join(lines) + "\n", 0 if n_ok == len(results) else EXIT_FAIL


# ---------------------------------------------------------------------------
# arctic

def cmd_arctic(args):
    cuts = A.cuts_from_hexagon(args.n1, args.n2, args.d, args.b)
    curve = A.sample_curve(cuts, args.w_min, args.w_max, args.samples)
    case = A.classify_cusp(args.n1, args.n2, args.d, args.b)
    if args.format == "svg":
        return A.curve_to_svg(curve, cuts), 0
    meta = {"schema": "tacnode.arctic/1", "n1": args.n1, "n2": args.n2, "d": args.d, "b": args.b,
            "cuts_a": list(cuts.a), "cuts_b": list(cuts.b), "case": case,
            "tangency_gap": A.tangency_gap(args.n1, args.n2, args.d, args.b),
            "oblique_gap": A.oblique_gap(args.n1, args.n2, args.d, args.b)}
    if args.format == "json":
        pts = [[_jnum(v) for v in row] for row in zip(curve.w, curve.x, curve.y, curve.slope)]
        meta = {k: ([_jnum(x) for x in v] if isinstance(v, list) else
                    (_jnum(v) if isinstance(v, float) else v)) for k, v in meta.items()}
        return json.dumps({**meta, "columns": ["w", "x", "y", "slope"], "points": pts},
                          indent=2, sort_keys=True) + "\n", 0
    head = "".join(f"# {k}={json.dumps(meta[k])}\n" for k in sorted(meta))
    return head + A.curve_to_csv(curve), 0


# ---------------------------------------------------------------------------
# osc

def cmd_osc(args):
    tau1, tau2 = args.tau1[0], args.tau2[0]
    rep = oscillation_report(tau1, tau2, args.rungs, QuadratureSpec(abs_tol=args.tol))
    summary = {"sign_changes": rep.sign_changes, "periodic": rep.periodic,
               "correlation": rep.correlation, "hard_pass": rep.hard_pass,
               "soft_pass": rep.soft_pass}
    if args.format == "json":
        text = json.dumps({"schema": "tacnode.osc/1", "tau1": tau1, "tau2": tau2,
                           "rows": [{"r": r, "direct": _jnum(d), "predicted": _jnum(p)}
                                    for r, d, p in zip(rep.rs, rep.direct, rep.predicted)],
                           **{k: (_jnum(v) if isinstance(v, float) else v)
                              for k, v in summary.items()}},
                          indent=2, sort_keys=True) + "\n"
    else:
        buf = io.StringIO()
        for k in sorted(summary):
            v = summary[k]
            buf.write(f"# {k}={fmt(v) if isinstance(v, float) else str(v).lower()}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["r", "direct", "predicted"])
        for r, d, p in zip(rep.rs, rep.direct, rep.predicted):
            w.writerow([r, fmt(d), fmt(p)])
        text = buf.getvalue()
    if not rep.soft_pass:
        print(f"tacnode: warning: sign correlation {rep.correlation:.3f} is below 0.5",
              file=sys.stderr)
    return text, 0 if rep.hard_pass else EXIT_FAIL


# ---------------------------------------------------------------------------
# parser

def build_parser():
    p = argparse.ArgumentParser(prog="tacnode", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"tacnode {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, formats=("csv", "json")):
        sp.add_argument("--tol", type=float, default=None,
                        help="absolute quadrature tolerance (default: $TACNODE_TOL or 1e-10)")
        sp.add_argument("--format", choices=("csv", "json", "svg"), default=formats[0])
        sp.add_argument("--out", type=Path, default=None, help="output file (default: stdout)")

    e = sub.add_parser("eval", help="tabulate a kernel on a grid")
    e.add_argument("--kernel", choices=KERNELS, required=True)
    e.add_argument("--r", type=int, default=2, help="filament count (GUE order for gue)")
    e.add_argument("--rho", type=int, default=0)
    e.add_argument("--beta", type=float, default=0.0)
    e.add_argument("--tau1", type=parse_range, default=[0])
    e.add_argument("--tau2", type=parse_range, default=[0])
    e.add_argument("--xi-grid", type=parse_grid, default=[0.0],
                   help="min:max:step, used for both coordinates")
    e.add_argument("--jobs", type=int, default=1, help="worker processes")
    common(e)

    c = sub.add_parser("converge", help="distance of the scaled kernel from its limit")
    c.add_argument("--tau1", type=parse_range, default=[1])
    c.add_argument("--tau2", type=parse_range, default=[1])
    c.add_argument("--xi1", type=float, default=0.5)
    c.add_argument("--xi2", type=float, default=-0.3)
    c.add_argument("--epsilon", type=int, choices=(1, -1), action="append", default=None)
    c.add_argument("--r", dest="rungs", type=lambda s: [int(t) for t in s.split(",")],
                   default=list(RUNGS), help="comma separated r ladder")
    common(c)

    s = sub.add_parser("selftest", help="run the invariant suite")
    common(s)

    a = sub.add_parser("arctic", help="sample the arctic curve of a hexagon with cuts")
    a.add_argument("--n1", type=float, default=2.0)
    a.add_argument("--n2", type=float, default=8.0)
    a.add_argument("--d", type=float, default=1 / 3)
    a.add_argument("--b", type=float, default=1 / 4)
    a.add_argument("--w-min", type=float, default=-15.0)
    a.add_argument("--w-max", type=float, default=20.0)
    a.add_argument("--samples", type=int, default=4001)
    common(a)

    o = sub.add_parser("osc", help="oscillatory sector diagnostics")
    o.add_argument("--tau1", type=parse_range, default=[1])
    o.add_argument("--tau2", type=parse_range, default=[-1])
    o.add_argument("--r", dest="rungs", type=parse_range, default=list(range(20, 53)),
                   help="range a..b of r values")
    common(o)
    return p


COMMANDS = {"eval": cmd_eval, "converge": cmd_converge, "selftest": cmd_selftest,
            "arctic": cmd_arctic, "osc": cmd_osc}


_VALUE_FLAGS = ("--tau1", "--tau2", "--xi-grid", "--xi1", "--xi2", "--w-min", "--w-max", "--beta")


def _join_negative_values(argv):
    # argparse treats "-1..2" or "-1:1:0.5" as an option; glue it to its flag
    out = []
    it = iter(argv)
    for tok in it:
        if tok in _VALUE_FLAGS:
            nxt = next(it, None)
            if nxt is None:
                out.append(tok)
            else:
                out.append(f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None):
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_join_negative_values(argv))
    if args.format == "svg" and args.command != "arctic":
        parser.error("svg output is only available for the arctic command")
    if args.tol is None:
        args.tol = default_tol()
    if args.tol <= 0:
        parser.error("--tol must be positive")
    if getattr(args, "epsilon", "unset") is None:
        args.epsilon = [1]
    try:
        text, code = COMMANDS[args.command](args)
    except (InvalidParameterError, UnsupportedSizeError, AccuracyError) as exc:
        print(f"tacnode: error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if args.out is None:
        sys.stdout.write(text)
    else:
        args.out.write_text(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
