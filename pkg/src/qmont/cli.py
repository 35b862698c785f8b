"""``qmont`` command-line front-end.

Exit codes: 0 success, 2 usage/domain/parse errors, 3 convergence failure,
4 non-convergence under ``--strict``.

Scan output (``disprove``) in JSON is one object per line; CSV always has a
header row. Column order for ``disprove``::

    x,node,residual_original,residual_corrected,error
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Any, Sequence

from qmont import funcexpr
from qmont.errors import ConvergenceError, QMontError
from qmont.montgomery import (
    IdentityReport,
    PointFailure,
    check_identity,
    convexity_step_check,
    lattice_nodes,
    residual_scan,
)
from qmont.qcore import (
    QContext,
    RealFn,
    SeriesControl,
    classical_derivative_fd,
    jackson_integral,
    jackson_integral_sub,
    q_derivative,
    q_derivative_at_a,
    riemann_integral_oracle,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CONVERGENCE = 3
EXIT_STRICT = 4

DISPROVE_COLUMNS = ["x", "node", "residual_original", "residual_corrected", "error"]
DEFAULT_Q_LIST = [1.0 - 2.0**-j for j in range(3, 11)]


class CliFailure(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _machine(v: Any) -> str:
    """Number rendering for JSON/CSV: 17 significant digits."""
    if isinstance(v, float):
        if not math.isfinite(v):
            return "null"
        return format(v, ".17g")
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "null"
    if isinstance(v, int):
        return str(v)
    return json.dumps(v)


def _json_line(record: dict[str, Any]) -> str:
    parts = []
    for key, value in record.items():
        if isinstance(value, list):
            rendered = "[" + ", ".join(
                _json_line(v) if isinstance(v, dict) else _machine(v) for v in value
            ) + "]"
        else:
            rendered = _machine(value)
        parts.append(f"{json.dumps(key)}: {rendered}")
    return "{" + ", ".join(parts) + "}"


def _csv_cell(v: Any) -> str:
    if isinstance(v, float):
        return format(v, ".17g")
    if v is None:
        return ""
    return str(v)


def _table_cell(v: Any) -> str:
    if isinstance(v, float):
        return format(v, ".6g")
    if v is None:
        return ""
    return str(v)


def render(rows: list[dict[str, Any]], columns: list[str], output: str) -> str:
    """Render flat records as aligned table, JSON lines or RFC-4180 CSV."""
    if output == "json":
        return "".join(_json_line({c: row.get(c) for c in columns}) + "\n" for row in rows)
    if output == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\r\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_csv_cell(row.get(c)) for c in columns])
        return buf.getvalue()
    cells = [[_table_cell(row.get(c)) for c in columns] for row in rows]
    widths = [max([len(c)] + [len(r[i]) for r in cells]) for i, c in enumerate(columns)]
    lines = ["  ".join(c.rjust(w) for c, w in zip(columns, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(v.rjust(w) for v, w in zip(r, widths)) for r in cells]
    return "\n".join(lines) + "\n"


def _setup(args: argparse.Namespace) -> tuple[QContext, SeriesControl, RealFn]:
    ctx = QContext(args.q, args.a, args.b)
    control = SeriesControl(tol=args.tol, max_terms=args.max_terms)
    f = funcexpr.compile_fn(args.function)
    return ctx, control, f


def cmd_qderiv(args: argparse.Namespace) -> tuple[str, int]:
    ctx, control, f = _setup(args)
    if args.at_a:
        x, value = ctx.a, q_derivative_at_a(f, ctx, control)
    else:
        if args.x is None:
            raise CliFailure("qderiv needs -x (or --at-a)", EXIT_USAGE)
        x, value = args.x, q_derivative(f, ctx, args.x)
    row = {"function": f.label, "q": ctx.q, "x": x, "value": value}
    return render([row], ["function", "q", "x", "value"], args.output), EXIT_OK


def cmd_qint(args: argparse.Namespace) -> tuple[str, int]:
    ctx, control, f = _setup(args)
    if args.x is None:
        raise CliFailure("qint needs -x", EXIT_USAGE)
    if args.c is None:
        res = jackson_integral(f, ctx, args.x, control)
    else:
        res = jackson_integral_sub(f, ctx, args.c, args.x, control)
    row = {
        "function": f.label,
        "q": ctx.q,
        "lower": ctx.a if args.c is None else args.c,
        "x": args.x,
        "value": res.value,
        "terms_used": res.terms_used,
        "tail_estimate": res.tail_estimate,
        "converged": res.converged,
    }
    code = EXIT_STRICT if args.strict and not res.converged else EXIT_OK
    return render([row], list(row), args.output), code


def _report_row(rep: IdentityReport | PointFailure) -> dict[str, Any]:
    if isinstance(rep, PointFailure):
        return {"x": rep.x, "error": rep.error}
    return {
        "x": rep.x,
        "node": rep.node,
        "avg_integral": rep.avg_integral,
        "lhs_original": rep.lhs_original,
        "lhs_corrected": rep.lhs_corrected,
        "rhs": rep.rhs,
        "residual_original": rep.residual_original,
        "residual_corrected": rep.residual_corrected,
        "terms_used": rep.series.terms_used,
        "converged": rep.converged,
        "error": None,
    }


def cmd_check(args: argparse.Namespace) -> tuple[str, int]:
    ctx, control, f = _setup(args)
    if args.x is None:
        raise CliFailure("check needs -x", EXIT_USAGE)
    row = _report_row(check_identity(f, ctx, args.x, control))
    row.pop("error")
    return render([row], list(row), args.output), EXIT_OK


def disprove_points(ctx: QContext, n_points: int) -> list[float]:
    """``n_points`` evenly spaced interior points followed by the first five lattice nodes."""
    xs = [ctx.a + ctx.width * i / (n_points + 1) for i in range(1, n_points + 1)]
    return xs + lattice_nodes(ctx, 5)


def cmd_disprove(args: argparse.Namespace) -> tuple[str, int]:
    ctx, control, f = _setup(args)
    if args.points < 0:
        raise CliFailure("--points must be >= 0", EXIT_USAGE)
    reports = residual_scan(f, ctx, disprove_points(ctx, args.points), control)
    rows = [_report_row(r) for r in reports]
    return render(rows, DISPROVE_COLUMNS, args.output), EXIT_OK


def cmd_convexity(args: argparse.Namespace) -> tuple[str, int]:
    ctx, control, f = _setup(args)
    if not args.r >= 1.0:
        raise CliFailure(f"-r must be >= 1, got {args.r}", EXIT_USAGE)
    if args.grid < 2:
        raise CliFailure("--grid must be >= 2", EXIT_USAGE)
    grid = [i / (args.grid - 1) for i in range(args.grid)]
    rep = convexity_step_check(f, ctx, args.r, grid, control)
    rows = [
        {"bound": name, "t": t, "lhs": lhs, "rhs_bound": bound}
        for name, viol in (("corrected", rep.corrected_violations), ("erroneous", rep.erroneous_violations))
        for t, lhs, bound in viol
    ]
    columns = ["bound", "t", "lhs", "rhs_bound"]
    if args.output == "json":
        summary = {
            "function": f.label,
            "r": rep.r,
            "grid": args.grid,
            "deriv_a": rep.deriv_a,
            "deriv_b": rep.deriv_b,
            "corrected_violations": len(rep.corrected_violations),
            "erroneous_violations": len(rep.erroneous_violations),
            "violations": rows,
        }
        return _json_line(summary) + "\n", EXIT_OK
    text = render(rows, columns, args.output)
    if args.output == "table":
        text = (
            f"D_q f(a) = {rep.deriv_a:.6g}, D_q f(b) = {rep.deriv_b:.6g}, r = {rep.r:g}\n"
            f"corrected bound violations: {len(rep.corrected_violations)} / {args.grid}\n"
            f"erroneous bound violations: {len(rep.erroneous_violations)} / {args.grid}\n" + text
        )
    return text, EXIT_OK


def _parse_q_list(text: str | None) -> list[float]:
    if not text:
        return DEFAULT_Q_LIST
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise CliFailure(f"bad --q-list: {exc}", EXIT_USAGE) from exc


def cmd_limit_check(args: argparse.Namespace) -> tuple[str, int]:
    ctx, control, f = _setup(args)
    if args.x is None:
        raise CliFailure("limit-check needs -x", EXIT_USAGE)
    fd = classical_derivative_fd(f, args.x, args.fd_step)
    simpson = riemann_integral_oracle(f, ctx.a, args.x, 256)
    rows = []
    for q in _parse_q_list(args.q_list):
        qctx = QContext(q, ctx.a, ctx.b)
        dq = q_derivative(f, qctx, args.x)
        qi = jackson_integral(f, qctx, args.x, control)
        rows.append(
            {
                "q": q,
                "q_derivative": dq,
                "derivative_error": abs(dq - fd),
                "q_integral": qi.value,
                "integral_error": abs(qi.value - simpson),
                "converged": qi.converged,
            }
        )
    return render(rows, list(rows[0]) if rows else ["q"], args.output), EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-f", "--function", required=True, help="expression in t, e.g. 't^2 + sin(t)'")
    common.add_argument("-q", type=float, required=True, help="deformation parameter, 0 < q < 1")
    common.add_argument("-a", type=float, required=True, help="left endpoint")
    common.add_argument("-b", type=float, required=True, help="right endpoint")
    common.add_argument("--tol", type=float, default=1e-12)
    common.add_argument("--max-terms", type=int, default=1_000_000)
    common.add_argument("--output", choices=["table", "json", "csv"], default="table")

    parser = argparse.ArgumentParser(prog="qmont", description="q-derivative, Jackson integral and quantum Montgomery identity checks")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("qderiv", parents=[common], help="q-derivative at a point")
    p.add_argument("-x", type=float)
    p.add_argument("--at-a", action="store_true", help="limit value at the left endpoint")
    p.set_defaults(handler=cmd_qderiv)

    p = sub.add_parser("qint", parents=[common], help="Jackson integral over [a, x] or [c, x]")
    p.add_argument("-x", type=float)
    p.add_argument("-c", type=float)
    p.add_argument("--strict", action="store_true", help="exit 4 if the series hit the term cap")
    p.set_defaults(handler=cmd_qint)

    p = sub.add_parser("check", parents=[common], help="both Montgomery identities at one x")
    p.add_argument("-x", type=float)
    p.set_defaults(handler=cmd_check)

    p = sub.add_parser("disprove", parents=[common], help="residual scan over (a, b) plus lattice nodes")
    p.add_argument("--points", type=int, default=50)
    p.set_defaults(handler=cmd_disprove)

    p = sub.add_parser("convexity", parents=[common], help="corrected vs erroneous convexity bound")
    p.add_argument("-r", type=float, default=1.0)
    p.add_argument("--grid", type=int, default=101)
    p.set_defaults(handler=cmd_convexity)

    p = sub.add_parser("limit-check", parents=[common], help="q -> 1 convergence against classical oracles")
    p.add_argument("-x", type=float)
    p.add_argument("--q-list", help="comma-separated q values (default 1-2^-j, j=3..10)")
    p.add_argument("--fd-step", type=float, default=1e-6, help="central difference step")
    p.set_defaults(handler=cmd_limit_check)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text, code = args.handler(args)
    except CliFailure as exc:
        print(f"qmont: error: {exc}", file=sys.stderr)
        return exc.code
    except ConvergenceError as exc:
        print(f"qmont: convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except QMontError as exc:
        print(f"qmont: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
