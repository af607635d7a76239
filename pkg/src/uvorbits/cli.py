"""Command-line interface: ``uvorbits <subcommand> ...``.

Exit codes: 0 on success, 1 on a computation error, 2 when ``tables --diff``
finds a row outside tolerance, 64 on a usage error. Errors are one JSON
line on stderr: ``{"error": "<kind>", "message": "..."}``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import __version__, kernels
from ._mp import DEFAULT_PRECISION
from .diagram import SweepConfig, figure_bundle, sweep_bifurcation, transitions
from .dynamics import (
    CPoint,
    Plane,
    c_value,
    derive_period_curve,
    eigenvalue_numeric,
    eigenvalue_symbolic,
    eigenvalue_xy,
    transform,
)
from .errors import UVOrbitsError
from .loci import classify_multiplier, critical_cycles, neutral_points
from .loci import to_csv as points_csv
from .reference import TABLE_IDS, count_report, diff_table, load_reference, regenerate, tables_for_period

__all__ = ["main", "build_parser", "run"]

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_MISMATCH = 2
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _global_flags(parser, suppress: bool):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    g = parser.add_argument_group("global options")
    g.add_argument("--precision", type=int, default=d(DEFAULT_PRECISION), metavar="BITS",
                   help="working precision in bits (default: %d)" % DEFAULT_PRECISION)
    g.add_argument("--tol", type=float, default=d(None),
                   help="tolerance; tables: match distance (default 1e-6), sweep: cluster tolerance (default 1e-5)")
    g.add_argument("--plane", type=str.lower, choices=("xy", "uv"), default=d("uv"),
                   help="coordinate plane of inputs and figures (default: uv)")
    g.add_argument("--out", default=d(None), metavar="PATH",
                   help="output file (figures: directory); default stdout / ./figures")
    g.add_argument("--format", type=str.lower, choices=("json", "csv", "svg"), default=d(None),
                   help="output format; the default depends on the subcommand")


def _number(text: str):
    """Exact Fraction when possible, else a complex number (``i`` or ``j`` unit)."""
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        pass
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _period(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"period must be an integer, got {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError("period must be positive")
    return n


def _floats(count: int):
    def parse(text: str) -> tuple:
        parts = [p for p in text.replace(" ", "").split(",") if p]
        if len(parts) != count:
            raise argparse.ArgumentTypeError(f"expected {count} comma-separated numbers, got {text!r}")
        return tuple(float(p) for p in parts)

    return parse


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="uvorbits", description="Periodic orbits of x^2 + c in (u, v) coordinates.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _global_flags(p, suppress=False)
    sub = p.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    def cmd(name, help_):
        sp = sub.add_parser(name, help=help_, description=help_)
        _global_flags(sp, suppress=True)
        return sp

    sp = cmd("curve", "exact period-n orbit curve C_n as polynomial JSON")
    sp.add_argument("n", type=_period)
    sp = cmd("eigenvalue", "exact multiplier lambda_n as num/den JSON")
    sp.add_argument("n", type=_period)
    sp = cmd("critical", "critical (super-attracting) n-cycles")
    sp.add_argument("n", type=_period)
    sp = cmd("neutral", "points of C_n with multiplier equal to a unit-modulus target")
    sp.add_argument("n", type=_period)
    sp.add_argument("--target", action="append", type=_number,
                    help="multiplier target, e.g. +1, -1, i (repeatable; default: +1 and -1)")
    sp = cmd("classify", "stability class and multiplier of an n-periodic point")
    sp.add_argument("u", type=_number)
    sp.add_argument("v", type=_number)
    sp.add_argument("n", type=_period)
    sp = cmd("transform", "convert a point between the (x, y) and (u, v) planes; --plane names the input plane")
    sp.add_argument("a", type=_number)
    sp.add_argument("b", type=_number)
    sp = cmd("c-value", "parameter c of the quadratic whose orbit contains the point")
    sp.add_argument("a", type=_number)
    sp.add_argument("b", type=_number)
    sp = cmd("sweep", "bifurcation sweep of the critical orbit over c")
    sp.add_argument("--c-min", type=float, default=-2.0, help="(default: -2)")
    sp.add_argument("--c-max", type=float, default=0.25, help="(default: 0.25)")
    sp.add_argument("--steps", type=int, default=2000, help="number of c columns (default: 2000)")
    sp.add_argument("--transient", type=int, default=1000, help="(default: 1000)")
    sp.add_argument("--keep", type=int, default=256, help="(default: 256)")
    sp.add_argument("--escape-radius", type=float, default=10.0, help="(default: 10)")
    sp = cmd("figures", "write every figure family as CSV or SVG plus manifest.json")
    sp.add_argument("--period-max", type=int, default=5, help="(default: 5)")
    sp.add_argument("--bbox", type=_floats(4), default=(-3.0, 3.0, -3.0, 3.0), metavar="UMIN,UMAX,VMIN,VMAX",
                    help="(default: -3,3,-3,3)")
    sp.add_argument("--resolution", type=_floats(2), default=(401, 401), metavar="NX,NY",
                    help="(default: 401,401)")
    sp.add_argument("--with-sweep", action="store_true", help="also write the bifurcation sweep")
    sp = cmd("tables", "regenerate the reference point tables")
    sp.add_argument("--period", type=int, choices=(3, 4, 5), help="only the tables of this period")
    sp.add_argument("--table", choices=TABLE_IDS, help="a single table")
    sp.add_argument("--diff", action="store_true",
                    help="compare with the embedded values; exit 2 on mismatch")
    sp.add_argument("--full-counts", action="store_true",
                    help="with --diff, also solve the period-5 neutral system for the count report (minutes)")
    return p


# ---------------------------------------------------------------------------
# Output helpers.


def _num_json(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    if isinstance(x, int):
        return x
    z = complex(x)
    return [z.real, z.imag]


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _fmt_complex(z) -> str:
    z = complex(z)
    if abs(z.imag) <= 1e-12 * (1 + abs(z)):
        return f"{z.real:.12g}"
    return f"{z.real:.12g}{z.imag:+.12g}j"


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fmt(args, default: str, allowed: tuple) -> str:
    fmt = args.format or default
    if fmt not in allowed:
        raise UsageError(f"--format {fmt} is not supported by {args.command} (use {' or '.join(allowed)})")
    return fmt


def _point(args, a, b) -> CPoint:
    return CPoint(a, b, Plane(args.plane.upper()))


# ---------------------------------------------------------------------------
# Subcommands.


def _curve(args) -> int:
    _fmt(args, "json", ("json",))
    _emit(args, _dump_json(derive_period_curve(args.n).to_json()))
    return EXIT_OK


def _eigenvalue(args) -> int:
    _fmt(args, "json", ("json",))
    out = eigenvalue_symbolic(args.n).to_json()
    out["period"] = args.n
    _emit(args, _dump_json(out))
    return EXIT_OK


def _critical(args) -> int:
    fmt = _fmt(args, "json", ("json", "csv"))
    cycles = critical_cycles(args.n, args.precision)
    if fmt == "csv":
        _emit(args, points_csv([p for c in cycles for p in c]))
    else:
        _emit(args, _dump_json({"period": args.n, "cycles": [[p.to_json() for p in c] for c in cycles]}))
    return EXIT_OK


def _neutral(args) -> int:
    fmt = _fmt(args, "json", ("json", "csv"))
    targets = tuple(args.target) if args.target else (1, -1)
    targets = tuple(int(t) if isinstance(t, Fraction) and t.denominator == 1 else t for t in targets)
    pts = neutral_points(args.n, targets, args.precision)
    if fmt == "csv":
        _emit(args, points_csv(pts))
    else:
        _emit(args, _dump_json({"period": args.n, "targets": [_num_json(t) for t in targets],
                                "points": [p.to_json() for p in pts]}))
    return EXIT_OK


def _classify(args) -> int:
    fmt = _fmt(args, "json", ("json",)) if args.format else None
    p = _point(args, args.u, args.v)
    if p.plane is Plane.XY:
        lam = eigenvalue_xy(p, args.n, args.precision)
    else:
        lam = eigenvalue_numeric(p, args.n, args.precision)
    kind = classify_multiplier(lam)
    if fmt == "json":
        _emit(args, _dump_json({"class": kind, "lambda": _num_json(lam), "period": args.n,
                                "plane": p.plane.value}))
    else:
        _emit(args, f"{kind}, lambda={_fmt_complex(lam)}\n")
    return EXIT_OK


def _transform(args) -> int:
    _fmt(args, "json", ("json",))
    p = _point(args, args.a, args.b)
    q = transform(p, Plane.UV if p.plane is Plane.XY else Plane.XY)
    _emit(args, _dump_json({"plane": q.plane.value, "first": _num_json(q.first),
                            "second": _num_json(q.second)}))
    return EXIT_OK


def _c_value(args) -> int:
    _fmt(args, "json", ("json",))
    p = _point(args, args.a, args.b)
    _emit(args, _dump_json({"c": _num_json(c_value(p)), "plane": p.plane.value}))
    return EXIT_OK


def _sweep(args) -> int:
    fmt = _fmt(args, "csv", ("csv", "json"))
    cfg = SweepConfig(
        c_min=args.c_min, c_max=args.c_max, c_steps=args.steps, transient=args.transient,
        keep=args.keep, escape_radius=args.escape_radius, plane=Plane(args.plane.upper()),
        cluster_tol=args.tol if args.tol is not None else SweepConfig.cluster_tol,
    )
    res = sweep_bifurcation(cfg)
    if fmt == "csv":
        buf = io.StringIO()
        res.to_csv(buf)
        _emit(args, buf.getvalue())
    else:
        _emit(args, _dump_json({
            "backend": kernels.BACKEND,
            "c": res.c.tolist(),
            "period": res.periods,
            "status": res.status,
            "transitions": [{"c": c, "from": a, "to": b} for c, a, b in transitions(res)],
        }))
    return EXIT_OK


def _figures(args) -> int:
    fmt = _fmt(args, "csv", ("csv", "svg"))
    out_dir = args.out or "figures"
    res = tuple(int(r) for r in args.resolution)
    sweep = SweepConfig(plane=Plane(args.plane.upper())) if args.with_sweep else None
    manifest = figure_bundle(out_dir, args.period_max, args.bbox, res, Plane(args.plane.upper()),
                             formats=(fmt,), sweep=sweep)
    sys.stdout.write(f"wrote {len(manifest['files'])} files to {out_dir}\n")
    return EXIT_OK


def _tables(args) -> int:
    fmt = _fmt(args, "csv", ("csv", "json"))
    tol = args.tol if args.tol is not None else 1e-6
    if args.table:
        ids = [args.table]
    elif args.period:
        ids = tables_for_period(args.period)
    else:
        ids = list(TABLE_IDS)
    rows, diffs = [], []
    for t in ids:
        pts = regenerate(t, args.precision)
        d = diff_table(t, pts, tol)
        diffs.append(d)
        ref_of = {m.computed: m for m in d.matches if m.computed is not None}
        for k, p in enumerate(pts):
            m = ref_of.get(k)
            rows.append((t, k, p, m))
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["table", "index", "re_u", "im_u", "re_v", "im_v", "re_lambda", "im_lambda",
                    "class", "multiplicity", "reference_row", "distance"])
        for t, k, p, m in rows:
            u, v, lam = complex(p.point.first), complex(p.point.second), complex(p.eigenvalue)
            w.writerow([t, k, repr(u.real), repr(u.imag), repr(v.real), repr(v.imag),
                        repr(lam.real), repr(lam.imag), p.classification, p.multiplicity,
                        "" if m is None else m.row, "" if m is None else f"{m.distance:.3e}"])
        _emit(args, buf.getvalue())
    else:
        _emit(args, _dump_json({t: [dict(p.to_json(), reference_row=None if m is None else m.row)
                                    for tt, _, p, m in rows if tt == t] for t in ids}))
    if not args.diff:
        return EXIT_OK
    bad = [line for d in diffs for line in d.report_lines()]
    for line in bad:
        sys.stderr.write(f"mismatch: {line}\n")
    periods = sorted({load_reference()["tables"][t]["period"] for t in ids})
    for n in periods:
        for entry in count_report(n, args.precision, 5 if args.full_counts else 4):
            found = "not computed" if entry["found"] is None else entry["found"]
            extra = f" ({entry['detail']})" if entry["detail"] else ""
            sys.stderr.write(
                f"documented-discrepancy: period {n} {entry['quantity']}: reference "
                f"{entry['reference']}, found {found}{extra}\n"
            )
    return EXIT_MISMATCH if bad else EXIT_OK


_COMMANDS = {
    "curve": _curve,
    "eigenvalue": _eigenvalue,
    "critical": _critical,
    "neutral": _neutral,
    "classify": _classify,
    "transform": _transform,
    "c-value": _c_value,
    "sweep": _sweep,
    "figures": _figures,
    "tables": _tables,
}


def _error_line(kind: str, message: str) -> None:
    sys.stderr.write(json.dumps({"error": kind, "message": " ".join(str(message).split())}) + "\n")


def run(argv=None) -> int:
    """Parse ``argv`` and run the subcommand; returns the exit code."""
    try:
        args = build_parser().parse_args(argv)
        if args.precision < 16:
            raise UsageError("--precision must be at least 16 bits")
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        _error_line("usage", exc)
        return EXIT_USAGE
    except (UVOrbitsError, ValueError, ArithmeticError, OSError) as exc:
        _error_line(type(exc).__name__, exc)
        return EXIT_ERROR


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
