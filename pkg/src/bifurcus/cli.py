"""Command-line interface.

    bifurcus --system "lambda*x - x^3" --param lambda --out ex1.svg --check

Exit status is 0 on success, 2 when the input cannot be analysed and 3 when
``--check`` finds the diagram and the oracle disagree.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .errors import BifurcusError
from .oracle import compare, default_grid
from .pipeline import AnalysisConfig, analyze, max_residual
from .render import step_trace, to_csv, to_json, to_svg

EXIT_OK, EXIT_INPUT, EXIT_CHECK = 0, 2, 3
FORMATS = ("svg", "csv", "json")


def _range(text: str) -> tuple[float, float]:
    try:
        a, b = (float(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a:b, got {text!r}") from None
    if not b > a:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return a, b


def _grid_size(text: str) -> int:
    n = int(text)
    if n < 2:
        raise argparse.ArgumentTypeError("grid size must be at least 2")
    return n


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="bifurcus",
        description="Bifurcation diagrams of x' = f(x) + lambda*g(x) with polynomial f, g.",
        epilog="Ranges starting with a minus sign need '=': --x-range=-2:2",
    )
    p.add_argument("--system", required=True, help="right-hand side, e.g. 'lambda*x - x^3'")
    p.add_argument("--state", default="x", help="state symbol (default: x)")
    p.add_argument("--param", default="lambda", help="parameter symbol (default: lambda)")
    p.add_argument("--x-range", type=_range, metavar="A:B", help="state window")
    p.add_argument("--param-range", type=_range, metavar="A:B", help="parameter window")
    p.add_argument("--domain-min", type=float, metavar="V", help="discard states below V, e.g. 0 for a radius")
    p.add_argument("--multiply-state", action="store_true",
                   help="multiply the expression by the state symbol (polar form r' = r*[...])")
    p.add_argument("--out", type=Path, metavar="PATH", help="write the diagram here")
    p.add_argument("--format", choices=FORMATS, help="output format (default: from --out suffix, else svg)")
    p.add_argument("--trace", action="store_true", help="print the step-by-step construction")
    p.add_argument("--check", action="store_true", help="compare against the brute-force oracle")
    p.add_argument("--grid", type=_grid_size, default=1000, metavar="N", help="oracle grid size (default: 1000)")
    p.add_argument("--tol", type=float, default=1e-4, metavar="T",
                   help="oracle Hausdorff tolerance (default: 1e-4)")
    p.add_argument("--report", type=Path, metavar="PATH", help="write the oracle report as JSON")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def _format(args) -> str:
    if args.format:
        return args.format
    if args.out is not None and args.out.suffix.lstrip(".").lower() in FORMATS:
        return args.out.suffix.lstrip(".").lower()
    return "svg"


def _fmt(v: float) -> str:
    return format(round(v, 6) + 0.0, "g")


def summary(diagram, residual: float) -> str:
    n = len(diagram.branches) + len(diagram.constant_branches)
    pts = "; ".join(f"{p.kind} at ({_fmt(p.param)}, {_fmt(p.x)})" for p in diagram.bifurcations)
    return (f"{n} branch{'es' if n != 1 else ''} ({len(diagram.constant_branches)} constant), "
            f"{len(diagram.bifurcations)} bifurcation point{'s' if len(diagram.bifurcations) != 1 else ''}"
            f"{': ' + pts if pts else ''}; max residual {residual:.3g}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    config = AnalysisConfig(x_window=args.x_range, param_window=args.param_range,
                            domain_min=args.domain_min)
    try:
        diagram = analyze(args.system, args.state, args.param, args.multiply_state, config)
    except BifurcusError as exc:
        print(f"bifurcus: parse: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"bifurcus: decompose: {exc}", file=sys.stderr)
        return EXIT_INPUT

    report = None
    if args.check:
        report = compare(diagram, default_grid(diagram, args.grid), tol=args.tol)

    if args.out is not None:
        fmt = _format(args)
        text = {"svg": to_svg, "csv": to_csv, "json": to_json}[fmt](diagram)
        args.out.write_bytes(text.encode("utf-8"))
    if args.report is not None and report is not None:
        args.report.write_bytes(to_json(report).encode("utf-8"))
    if args.trace:
        print(step_trace(diagram, report), end="")
    print(summary(diagram, max_residual(diagram)))

    if report is not None:
        print(f"oracle: max Hausdorff {report.max_hausdorff_checked:.3g} over {len(report.grid)} columns, "
              f"{report.stability_mismatches} stability mismatches")
        if not report.passed:
            if report.max_hausdorff_checked >= report.tolerance:
                where = f"worst column at {args.param}={report.worst_lambda!r}"
            else:
                where = f"first mismatch at {args.param}={report.mismatch_details[0]['lambda']!r}"
            print(f"bifurcus: check failed: {where}", file=sys.stderr)
            return EXIT_CHECK
    return EXIT_OK
