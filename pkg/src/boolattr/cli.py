"""Command-line front end.

Exit codes: 0 success, 1 parse/validation/input error, 2 capacity or resource
error, 3 when ``compare`` finds the engines disagree.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path

from .attractors import COMPLEX
from .engine import DEFAULT_LENGTH_CAP, EngineConfig, find_all_attractors
from .errors import BoolNetError, CapacityError, ParseError, ResourceError
from .model import BooleanNetwork, UpdateMode, validate_network
from .oracle import build_transition_graph, classify_attractors, to_dot, transient_sccs
from .parser import load_network
from .report import RunReport

EXIT_OK, EXIT_INPUT, EXIT_CAPACITY, EXIT_DISAGREE = 0, 1, 2, 3
DOT_LIMIT = 12

log = logging.getLogger("boolattr")


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", required=True, help="network file (targets, factors format)")
    common.add_argument("--mode", choices=["sync", "async"], default="sync")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("-v", "--verbose", action="store_true")

    run = argparse.ArgumentParser(add_help=False)
    run.add_argument("--initial-length", type=int, default=1)
    run.add_argument("--length-cap", type=int, default=DEFAULT_LENGTH_CAP)
    run.add_argument("--output", choices=["text", "json"], default="text")
    run.add_argument("--report-unstable", action="store_true",
                     help="list the unstable cycles in text output")

    parser = argparse.ArgumentParser(prog="boolattr", description="Attractors of Boolean networks.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("find", parents=[common, run], help="list attractors")
    p.add_argument("--engine", choices=["bounded", "explicit"], default="bounded")
    p.add_argument("--dot", help="also write the transition graph as DOT")

    sub.add_parser("compare", parents=[common, run], help="run both engines and compare")

    p = sub.add_parser("export-dot", parents=[common], help="write the transition graph as DOT")
    p.add_argument("--dot", help="output path (default: stdout)")

    sub.add_parser("validate", parents=[common], help="check a network file")
    return parser


def _load(path: str) -> BooleanNetwork:
    try:
        net = load_network(path)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror or exc}", EXIT_INPUT) from exc
    except ParseError as exc:
        raise CliError(f"{path}: {exc}", EXIT_INPUT) from exc
    except CapacityError as exc:
        raise CliError(f"{path}: {exc}", EXIT_CAPACITY) from exc
    except BoolNetError as exc:
        raise CliError(f"{path}: {exc}", EXIT_INPUT) from exc
    report = validate_network(net)
    for f in report.warnings:
        log.info("%s", f)
    if not report.ok:
        raise CliError("; ".join(str(f) for f in report.errors), EXIT_INPUT)
    return net


def run_bounded(net: BooleanNetwork, args) -> RunReport:
    cfg = EngineConfig(mode=args.mode, initial_length=args.initial_length,
                       length_cap=args.length_cap, workers=args.workers)
    t0 = time.perf_counter()
    try:
        res = find_all_attractors(net, cfg)
    except ResourceError as exc:
        raise CliError(str(exc), EXIT_CAPACITY) from exc
    return RunReport.build(net.name, net.n, cfg.mode.value, "bounded", res.attractors,
                           res.unstable_cycles, time.perf_counter() - t0, res.final_length,
                           res.warnings)


def run_explicit(net: BooleanNetwork, args) -> RunReport:
    t0 = time.perf_counter()
    tg = build_transition_graph(net, args.mode, workers=args.workers)
    attractors = classify_attractors(tg)
    transient = transient_sccs(tg)
    return RunReport.build(net.name, net.n, tg.mode.value, "explicit", attractors,
                           transient, time.perf_counter() - t0, None)


def _emit(report: RunReport, args, out):
    if args.output == "json":
        out.write(report.to_json() + "\n")
    else:
        out.write(report.to_text(show_unstable=args.report_unstable))


def _write_dot(net: BooleanNetwork, mode, workers, dest, out):
    if net.n > DOT_LIMIT:
        raise CliError(f"DOT export is limited to {DOT_LIMIT} genes; network has {net.n}",
                       EXIT_CAPACITY)
    tg = build_transition_graph(net, mode, workers=workers)
    text = to_dot(tg, title=net.name)
    if dest:
        Path(dest).write_text(text, encoding="utf-8")
    else:
        out.write(text)


def cmd_find(args, out) -> int:
    net = _load(args.input)
    report = run_explicit(net, args) if args.engine == "explicit" else run_bounded(net, args)
    _emit(report, args, out)
    if args.dot:
        _write_dot(net, args.mode, args.workers, args.dot, out)
    return EXIT_OK


def _keys(report: RunReport) -> set:
    return {(a.kind, a.states) for a in report.attractors if a.kind != COMPLEX}


def cmd_compare(args, out) -> int:
    net = _load(args.input)
    explicit = run_explicit(net, args)
    bounded = run_bounded(net, args)
    a, b = _keys(bounded), _keys(explicit)
    same = a == b
    if args.output == "json":
        out.write(json.dumps({
            "agree": same,
            "bounded": bounded.to_dict(),
            "explicit": explicit.to_dict(),
        }, indent=2) + "\n")
    else:
        out.write(f"network: {net.name}  genes: {net.n}  mode: {bounded.mode}\n")
        for kind, states in sorted(a | b):
            tag = "both" if (kind, states) in a and (kind, states) in b else (
                "bounded only" if (kind, states) in a else "explicit only")
            out.write(f"  {tag:<13} {kind:<13} {' -> '.join(states)}\n")
        n_complex = sum(1 for x in explicit.attractors if x.kind == COMPLEX)
        if n_complex:
            out.write(f"  complex attractors (explicit only, not compared): {n_complex}\n")
        out.write(f"bounded: {len(a)} in {bounded.seconds:.3f} s, "
                  f"explicit: {len(b)} in {explicit.seconds:.3f} s\n")
        out.write("agree\n" if same else "DISAGREE\n")
    return EXIT_OK if same else EXIT_DISAGREE


def cmd_export_dot(args, out) -> int:
    net = _load(args.input)
    _write_dot(net, args.mode, args.workers, args.dot, out)
    return EXIT_OK


def cmd_validate(args, out) -> int:
    try:
        net = load_network(args.input)
    except OSError as exc:
        raise CliError(f"cannot read {args.input}: {exc.strerror or exc}", EXIT_INPUT) from exc
    except BoolNetError as exc:
        code = EXIT_CAPACITY if isinstance(exc, CapacityError) else EXIT_INPUT
        raise CliError(f"{args.input}: {exc}", code) from exc
    report = validate_network(net)
    out.write(f"network: {net.name}  genes: {net.n}\n")
    for f in report.errors + report.warnings:
        out.write(f"  {f}\n")
    out.write("ok\n" if report.ok else "invalid\n")
    return EXIT_OK if report.ok else EXIT_INPUT


COMMANDS = {"find": cmd_find, "compare": cmd_compare, "export-dot": cmd_export_dot,
            "validate": cmd_validate}


def main(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=err)
    args.mode = UpdateMode.parse(args.mode).value
    try:
        return COMMANDS[args.command](args, out)
    except CliError as exc:
        err.write(f"error: {exc}\n")
        return exc.code
    except CapacityError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_CAPACITY
    except (BoolNetError, ValueError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
