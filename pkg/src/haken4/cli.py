"""Command-line front end: ``haken4 <command> ...``.

Exit status is 0 when the operation (and any verification it ran) passed,
1 when verification failed, and 2 for unreadable or malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from .bundles import GluingError, UnknownChart, resolve_chart
from .cobordism import (
    EmptyWord,
    MalformedSequence,
    Plan,
    PlanFormatError,
    dumps,
    load_plan,
    load_sequence,
    plan_cobordism,
    plan_surface_bundle,
    plan_torus_bundle,
    to_dot,
    verify,
)
from .cobordism.verify import FAIL, VerificationReport
from .mcg import ChartError, SurfaceChart, TwistWord, UnknownCurve, reduce
from .sl2z import MalformedInput, Mat2, TorusTwistWord, eval_torus_word, factor

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

_INPUT_ERRORS = (
    OSError,
    json.JSONDecodeError,
    MalformedInput,
    ChartError,
    UnknownCurve,
    UnknownChart,
    PlanFormatError,
    MalformedSequence,
    EmptyWord,
    GluingError,
)


def _load_charts(paths: Sequence[str] | None) -> dict[str, SurfaceChart]:
    charts = {}
    for p in paths or ():
        c = SurfaceChart.load(p)
        charts[c.name] = c
    return charts


def _chart(ref: str, charts: dict[str, SurfaceChart]) -> SurfaceChart:
    """A chart file path, or the name of a loaded or built-in chart."""
    if Path(ref).is_file():
        return SurfaceChart.load(ref)
    return resolve_chart(ref, charts)


def _torus_input(text: str) -> TorusTwistWord | Mat2:
    parts = text.replace(",", " ").split()
    if len(parts) == 4 and all(p.lstrip("+-").isdigit() for p in parts):
        return Mat2.parse(" ".join(parts))
    return TorusTwistWord.parse(text)


def _status(report: VerificationReport, strict: bool) -> str:
    if strict and report.necessary_only_count and report.ok:
        return FAIL
    return report.status


def _emit_plan(plan: Plan, args, extra: dict[str, SurfaceChart]) -> int:
    report = verify(plan, extra)
    status = _status(report, args.strict)
    if args.out:
        text = to_dot(plan) if args.format == "dot" else dumps(plan)
        Path(args.out).write_text(text, encoding="utf-8")
    residual = ",".join(str(t) for t in plan.target) or "none"
    shown = "pass" if status != FAIL else FAIL
    line = f"blocks={plan.block_count()} gluings={len(plan.gluings)} residual={residual} verify={shown}"
    if report.necessary_only_count:
        line += f" necessary_only={report.necessary_only_count}"
    print(line)
    if status == FAIL:
        _explain(report)
        return EXIT_FAIL
    return EXIT_OK


def _explain(report: VerificationReport) -> None:
    if report.ok:
        print("strict mode: necessary-only witnesses are not accepted", file=sys.stderr)
    for d in report.diagnostics:
        print(d, file=sys.stderr)


# ---------------------------------------------------------------- commands


def cmd_factor(args) -> int:
    m = Mat2.parse(args.matrix)
    w = factor(m)
    ok = eval_torus_word(w) == m
    print(str(w) or "id")
    print(f"round-trip: {'ok' if ok else 'FAILED'}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_reduce(args) -> int:
    chart = _chart(args.chart_file, _load_charts(args.chart))
    print(str(reduce(chart, TwistWord.parse(args.word))) or "id")
    return EXIT_OK


def cmd_plan_torus(args) -> int:
    return _emit_plan(plan_torus_bundle(_torus_input(args.word)), args, {})


def cmd_plan_surface(args) -> int:
    extra = _load_charts(args.chart)
    chart = _chart(args.chart_file, extra)
    extra[chart.name] = chart
    return _emit_plan(plan_surface_bundle(chart, args.word), args, extra)


def cmd_plan_cobordism(args) -> int:
    extra = _load_charts(args.chart)
    seq = load_sequence(args.sequence)
    other = load_sequence(args.other) if args.other else None
    return _emit_plan(plan_cobordism(seq, other, extra), args, extra)


def cmd_verify(args) -> int:
    plan = load_plan(args.plan)
    report = verify(plan, _load_charts(args.chart))
    print(report.render())
    if _status(report, args.strict) == FAIL:
        _explain(report)
        return EXIT_FAIL
    return EXIT_OK


def cmd_export_dot(args) -> int:
    plan = load_plan(args.plan)
    Path(args.out_path).write_text(to_dot(plan, Path(args.plan).stem), encoding="utf-8")
    return EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="haken4", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--chart", action="append", metavar="PATH", help="load an extra chart file (repeatable)")
    common.add_argument("--strict", action="store_true", help="treat necessary-only witnesses as failures")

    out = argparse.ArgumentParser(add_help=False)
    out.add_argument("--out", metavar="PATH", help="write the plan here")
    out.add_argument("--format", choices=("json", "dot"), default="json", help="format of --out (default json)")

    p = sub.add_parser("factor", help="factor an SL(2,Z) matrix into L/R twists")
    p.add_argument("matrix", help='entries "a b c d" in row-major order')
    p.set_defaults(func=cmd_factor)

    p = sub.add_parser("reduce", parents=[common], help="reduce a twist word on a chart")
    p.add_argument("chart_file", metavar="chart", help="chart file or built-in chart name")
    p.add_argument("word")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("plan-torus", parents=[common, out], help="plan bounding a torus bundle")
    p.add_argument("word", help='twist word such as "R.L^-1" or matrix "a b c d"')
    p.set_defaults(func=cmd_plan_torus)

    p = sub.add_parser("plan-surface", parents=[common, out], help="plan bounding a surface bundle")
    p.add_argument("chart_file", metavar="chart", help="chart file or built-in chart name")
    p.add_argument("word")
    p.set_defaults(func=cmd_plan_surface)

    p = sub.add_parser("plan-cobordism", parents=[common, out], help="plan from move sequences")
    p.add_argument("sequence")
    p.add_argument("other", nargs="?")
    p.set_defaults(func=cmd_plan_cobordism)

    p = sub.add_parser("verify", parents=[common], help="verify a plan file")
    p.add_argument("plan")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("export-dot", parents=[common], help="write a plan as a DOT graph")
    p.add_argument("plan")
    p.add_argument("out_path", metavar="out")
    p.set_defaults(func=cmd_export_dot)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (KeyError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
