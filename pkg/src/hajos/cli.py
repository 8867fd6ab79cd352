"""Command-line front end.

Exit codes: 0 success, 1 verification or invariant failure, 2 usage or
domain error, 3 resource limit.
"""

from __future__ import annotations

import argparse
import sys
from functools import lru_cache
from pathlib import Path

from . import analysis, builder
from .digraph import format_digraph, parse_digraph
from .exceptions import (
    DomainError,
    HajosError,
    InvalidDigraphError,
    ReplayError,
    SizeLimitError,
    TraceSemanticError,
    TraceSyntaxError,
    VerificationError,
)
from .trace import gc_paused, read_trace, verify, write_trace

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_LIMIT = 3


def _emit(pairs, fmt: str, out=None) -> None:
    out = out or sys.stdout
    if fmt == "kv":
        for key, value in pairs:
            print(f"{key}={value}", file=out)
    else:
        width = max(len(k) for k, _ in pairs)
        for key, value in pairs:
            print(f"{key.replace('_', ' '):<{width}}  {value}", file=out)


def _error(message: str, code: int) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _write_outputs(out_dir: Path, D, trace) -> tuple[str, str]:
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = f"C{D.order}"
    trace_name, graph_name = f"{stem}.hajos", f"{stem}.digraph"
    write_trace(trace, out_dir / trace_name)
    (out_dir / graph_name).write_text(format_digraph(D), encoding="ascii", newline="\n")
    return trace_name, graph_name


def _report(report, files, fmt: str, show_stages: bool) -> None:
    pairs = report.as_pairs()
    if files is not None:
        pairs += [("trace_file", files[0]), ("digraph_file", files[1])]
    _emit(pairs, fmt)
    if show_stages:
        for name, ops in report.stages:
            print(f"stage {name} ops={ops}")


def cmd_construct(args) -> int:
    try:
        D, trace, report = builder.construct_odd_cycle(args.N)
    except DomainError as exc:
        return _error(str(exc), EXIT_USAGE)
    except HajosError as exc:
        return _error(f"internal invariant failed: {exc}", EXIT_FAIL)
    files = _write_outputs(Path(args.out), D, trace)
    _report(report, files, args.format, args.stages)
    if report.bound is not None and report.op_count > report.bound:
        return _error("operation count exceeds the bound", EXIT_FAIL)
    return EXIT_OK


def cmd_reduce(args) -> int:
    try:
        D, trace, report = builder.reduce_power_cycle(args.n, args.m)
    except DomainError as exc:
        return _error(str(exc), EXIT_USAGE)
    except HajosError as exc:
        return _error(f"internal invariant failed: {exc}", EXIT_FAIL)
    files = _write_outputs(Path(args.out), D, trace) if args.out else None
    _report(report, files, args.format, args.stages)
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        trace = read_trace(args.trace)
    except OSError as exc:
        return _error(str(exc), EXIT_USAGE)
    except (TraceSyntaxError, TraceSemanticError, UnicodeDecodeError) as exc:
        return _error(f"parse error: {exc}", EXIT_USAGE)
    try:
        final, ops = verify(trace)
    except (ReplayError, VerificationError) as exc:
        print("status=fail")
        if exc.step is not None:
            print(f"failed_step={exc.step}")
        return _error(str(exc), EXIT_FAIL)
    _emit([("status", "ok"), ("order", final.order), ("ops", ops), ("steps", len(trace))], "kv")
    return EXIT_OK


def cmd_bounds(args) -> int:
    if args.N_max < 5:
        return _error(f"N_max must be at least 5, got {args.N_max}", EXIT_USAGE)
    rows = []
    ok = True
    for N in range(5, args.N_max + 1, 2):
        bound = builder.hajos_bound(N)
        low, high = builder.complexity_envelope(N)
        actual = None
        if args.construct:
            try:
                actual = builder.construct_odd_cycle(N)[2].op_count
            except HajosError as exc:
                return _error(f"construction of {N} failed: {exc}", EXIT_FAIL)
        x = bound if actual is None else actual
        inside = low < x < high
        ok &= inside and (actual is None or actual <= bound)
        rows.append((N, bound, "-" if actual is None else actual, low, high, inside))
    if args.format == "kv":
        for N, bound, actual, low, high, inside in rows:
            print(
                f"N={N} bound={bound} actual={actual} envelope_low={low:.6f} "
                f"envelope_high={high:.6f} in_envelope={'yes' if inside else 'no'}"
            )
    else:
        print(f"{'N':>6} {'bound':>8} {'actual':>8} {'N ln N':>14} {'13 N ln N':>14}  in")
        for N, bound, actual, low, high, inside in rows:
            print(f"{N:>6} {bound:>8} {actual!s:>8} {low:>14.3f} {high:>14.3f}  {'yes' if inside else 'NO'}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_dichromatic(args) -> int:
    try:
        text = Path(args.path).read_text(encoding="ascii")
        D = parse_digraph(text)
    except (OSError, UnicodeDecodeError, InvalidDigraphError) as exc:
        return _error(str(exc), EXIT_USAGE)
    try:
        chi, witness = analysis.dichromatic_number(D, limit=args.limit)
    except SizeLimitError as exc:
        return _error(str(exc), EXIT_LIMIT)
    except DomainError as exc:
        return _error(str(exc), EXIT_USAGE)
    print(chi)
    print("witness " + " ".join(f"{v}:{witness.colors[v]}" for v in sorted(witness.colors)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hajos",
        description="Build symmetric odd cycles from D(K3) with directed Hajós operations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def fmt_option(p):
        p.add_argument("--format", choices=("kv", "text"), default="kv", help="report layout")

    p = sub.add_parser("construct", help="construct D(C_N) and write its certificate")
    p.add_argument("N", type=int)
    p.add_argument("--out", default=".", help="output directory (default: current)")
    p.add_argument("--stages", action="store_true", help="also list operations per stage")
    fmt_option(p)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="replay a .hajos certificate and check its END line")
    p.add_argument("trace")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bounds", help="tabulate operation bounds and the N ln N envelope")
    p.add_argument("N_max", type=int)
    p.add_argument("--construct", action="store_true", help="also run every construction")
    fmt_option(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("dichromatic", help="exact dichromatic number of a small digraph file")
    p.add_argument("path")
    p.add_argument("--limit", type=int, default=None, help="maximum order for brute force")
    p.set_defaults(func=cmd_dichromatic)

    p = sub.add_parser("reduce", help="build D(C_{2^n+1}) and collapse it to D(C_{2m+1})")
    p.add_argument("n", type=int)
    p.add_argument("m", type=int)
    p.add_argument("--out", default=None, help="write certificate and digraph here")
    p.add_argument("--stages", action="store_true")
    fmt_option(p)
    p.set_defaults(func=cmd_reduce)
    return parser


@lru_cache(maxsize=1)
def _parser() -> argparse.ArgumentParser:
    # Parsing does not mutate the parser, so in-process callers can share one.
    return build_parser()


@gc_paused
def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
