"""Command-line front end.

Subcommands: synth, check, bound, hull, simulate, convert.  Exit codes:
0 success / Valid / Found; 1 negative analysis result (NotFound or
Invalid); 2 usage or input error; 3 internal or certificate error.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional

from .bounds import iteration_bound
from .core import rat, vec
from .lexicographic import InvalidTupleError, check_bmsllrf, llrf_to_mlrf
from .loops import (
    INTEGER_DOMAIN,
    KIND_BMS,
    KIND_MLRF,
    KIND_NESTED,
    KIND_WEAK_BMS,
    LoopParseError,
    RATIONAL_DOMAIN,
    SLCLoop,
    check_mlrf,
    check_nested,
    parse_loop,
    parse_tuple_file,
    transition_polyhedron,
)
from .polyhedra import CertificateError, HullIterationError, StrictRowError, integer_hull
from .reports import build_report, emit_report
from .simulator import (
    DEFAULT_MAX_STEPS,
    NondeterministicUpdateError,
    check_tuple_on_trace,
    run_loop,
    write_trace_csv,
)
from .synthesis import mlrf_to_nested, synth_lrf, synth_mlrf

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3

_DOMAINS = {"rat": RATIONAL_DOMAIN, "int": INTEGER_DOMAIN}
_KINDS = {"mlrf": KIND_MLRF, "nested": KIND_NESTED,
          "bms": KIND_BMS, "weak-bms": KIND_WEAK_BMS}


class _UsageError(ValueError):
    pass


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise _UsageError(f"cannot read {path}: {exc}") from exc


def _parse_x0(text: str, loop: SLCLoop):
    values = {}
    for part in text.split(","):
        name, _, raw = part.partition("=")
        name = name.strip()
        if name not in loop.var_names:
            raise _UsageError(f"unknown variable {name!r} in --x0")
        try:
            values[name] = rat(raw.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise _UsageError(f"bad value for {name!r} in --x0") from exc
    missing = [v for v in loop.var_names if v not in values]
    if missing:
        raise _UsageError(f"--x0 misses: {', '.join(missing)}")
    return vec([values[v] for v in loop.var_names])


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mphase",
        description="Termination analysis for single-path linear-constraint loops")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("loop_file")
        p.add_argument("--json", action="store_true",
                       help="emit a JSON report on stdout")

    p = sub.add_parser("synth", help="synthesize a multiphase ranking function")
    common(p)
    p.add_argument("--max-depth", type=int, default=5)
    p.add_argument("--domain", choices=sorted(_DOMAINS))
    p.add_argument("--lrf-only", action="store_true",
                   help="search a single linear ranking function only")

    p = sub.add_parser("check", help="check a ranking tuple")
    common(p)
    p.add_argument("--tuple", required=True, dest="tuple_file")
    p.add_argument("--kind", choices=sorted(_KINDS), default="mlrf")

    p = sub.add_parser("bound", help="compute the linear iteration bound")
    common(p)
    p.add_argument("--tuple", required=True, dest="tuple_file")
    p.add_argument("--x0", help='start state, e.g. "x=3,y=5"')

    p = sub.add_parser("hull", help="print the integer hull of the transition polyhedron")
    common(p)

    p = sub.add_parser("simulate", help="run a deterministic loop")
    common(p)
    p.add_argument("--x0", required=True)
    p.add_argument("--max-steps", type=int, default=DEFAULT_MAX_STEPS)
    p.add_argument("--tuple", dest="tuple_file")
    p.add_argument("--trace-out", dest="trace_out")

    p = sub.add_parser("convert", help="convert between ranking-tuple classes")
    common(p)
    p.add_argument("--tuple", required=True, dest="tuple_file")
    p.add_argument("--kind", choices=sorted(_KINDS), default="bms",
                   help="kind of the input tuple")
    p.add_argument("--to", choices=["mlrf", "nested"], default="mlrf")
    return parser


def _cmd_synth(args, loop: SLCLoop) -> tuple[int, dict]:
    domain = _DOMAINS[args.domain] if args.domain else loop.domain
    if args.lrf_only:
        result = synth_lrf(loop, domain=domain)
    else:
        result = synth_mlrf(loop, dmax=args.max_depth, domain=domain)
    extra = {"vacuous": True} if result.vacuous else None
    report = build_report(
        result.status, loop, depth=result.depth, domain=result.domain_used,
        hull_applied=result.hull_applied, tup=result.tuple,
        certs=result.certs, extra=extra)
    return (EXIT_OK if result.found else EXIT_NEGATIVE), report


def _cmd_check(args, loop: SLCLoop) -> tuple[int, dict]:
    kind = _KINDS[args.kind]
    tup = parse_tuple_file(_read(args.tuple_file), loop, kind=kind)
    q = transition_polyhedron(loop)
    if kind == KIND_NESTED:
        verdict = check_nested(q, tup)
        report = build_report("valid" if verdict.valid else "invalid", loop,
                              tup=tup, certs=verdict.certs,
                              witness=verdict.witness)
        return (EXIT_OK if verdict.valid else EXIT_NEGATIVE), report
    if kind in (KIND_BMS, KIND_WEAK_BMS):
        verdict = check_bmsllrf(q, tup, weak=kind == KIND_WEAK_BMS)
        report = build_report("valid" if verdict.valid else "invalid", loop,
                              tup=tup, witness=verdict.witness)
        return (EXIT_OK if verdict.valid else EXIT_NEGATIVE), report
    verdict = check_mlrf(q, tup)
    report = build_report("valid" if verdict.valid else "invalid", loop,
                          tup=tup, witness=verdict.witness)
    return (EXIT_OK if verdict.valid else EXIT_NEGATIVE), report


def _cmd_bound(args, loop: SLCLoop) -> tuple[int, dict]:
    tup = parse_tuple_file(_read(args.tuple_file), loop)
    q = transition_polyhedron(loop)
    x0 = _parse_x0(args.x0, loop) if args.x0 else None
    try:
        bound = iteration_bound(q, tup, x0=x0)
    except InvalidTupleError:
        verdict = check_mlrf(q, tup)
        report = build_report("invalid", loop, tup=tup, witness=verdict.witness)
        return EXIT_NEGATIVE, report
    report = build_report("valid", loop, tup=tup, bound=bound)
    return EXIT_OK, report


def _cmd_hull(args, loop: SLCLoop) -> tuple[int, Optional[dict]]:
    hull = integer_hull(transition_polyhedron(loop))
    names = loop.all_names()
    if args.json:
        report = {"status": "ok", "domain": "int", "hull_applied": True,
                  "constraints": [c.format(names) for c in hull.constraints]}
        return EXIT_OK, report
    print(hull.format(names))
    return EXIT_OK, None


def _cmd_simulate(args, loop: SLCLoop) -> tuple[int, dict]:
    x0 = _parse_x0(args.x0, loop)
    trace = run_loop(loop, x0, max_steps=args.max_steps)
    extra = {"steps": trace.steps, "outcome": trace.outcome}
    tup = None
    if args.tuple_file:
        tup = parse_tuple_file(_read(args.tuple_file), loop)
        verdict = check_tuple_on_trace(tup, trace)
        extra["all_ranked"] = verdict.all_ranked
        if not verdict.all_ranked:
            extra["unranked_at"] = verdict.unranked_at
    if args.trace_out:
        with open(args.trace_out, "w", encoding="utf-8", newline="") as out:
            write_trace_csv(out, trace, loop, tup)
    report = build_report("ok", loop, tup=tup, extra=extra)
    return EXIT_OK, report


def _cmd_convert(args, loop: SLCLoop) -> tuple[int, dict]:
    kind = _KINDS[args.kind]
    tup = parse_tuple_file(_read(args.tuple_file), loop, kind=kind)
    q = transition_polyhedron(loop)
    try:
        if args.to == "nested":
            out = mlrf_to_nested(q, tup)
            verdict = check_nested(q, out)
            certs = verdict.certs
        else:
            out = llrf_to_mlrf(q, tup)
            certs = ()
    except InvalidTupleError:
        report = build_report("invalid", loop, tup=tup)
        return EXIT_NEGATIVE, report
    report = build_report("valid", loop, depth=out.depth, tup=out, certs=certs)
    return EXIT_OK, report


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK

    try:
        loop = parse_loop(_read(args.loop_file))
        handler = {
            "synth": _cmd_synth,
            "check": _cmd_check,
            "bound": _cmd_bound,
            "hull": _cmd_hull,
            "simulate": _cmd_simulate,
            "convert": _cmd_convert,
        }[args.command]
        code, report = handler(args, loop)
        if report is not None:
            print(emit_report(report, "json" if args.json else "text", loop))
        return code
    except (CertificateError, HullIterationError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (_UsageError, LoopParseError, NondeterministicUpdateError,
            StrictRowError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
