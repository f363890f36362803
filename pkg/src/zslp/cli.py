"""Command-line front end: compress, decompress, count, search, stats.

Exit codes follow the grep convention: 0 when the run succeeded and, for
count/search, found at least one match; 1 when a count/search ran cleanly
but matched nothing; 2 for usage, pattern, or format errors. Missing input
paths mean stdin. All I/O is byte-oriented.
"""

from __future__ import annotations

import argparse
import json
import sys

from .automaton import NewlinePatternError, PatternSyntaxError, compile_pattern
from .engine import collect_stats, run_count
from .repair import compress, compression_report
from .reporter import report_matching_lines
from .slp import (
    InvalidGrammarError,
    Slp,
    SlpFormatError,
    ZslpReader,
    encode_slp,
    iter_expand,
)


def _open_input(path):
    if path is None:
        return sys.stdin.buffer, False
    return open(path, "rb"), True


def _open_output(path):
    if path is None:
        return sys.stdout.buffer, False
    return open(path, "wb"), True


def _cmd_compress(args) -> int:
    stream, close_in = _open_input(args.input)
    try:
        data = stream.read()
    finally:
        if close_in:
            stream.close()
    if not data:
        print("zslp: input error: refusing to compress empty input", file=sys.stderr)
        return 2
    slp = compress(data)
    payload = encode_slp(slp)
    out, close_out = _open_output(args.output)
    try:
        out.write(payload)
        out.flush()
    finally:
        if close_out:
            out.close()
    report = compression_report(slp, len(data))
    print(
        f"rules={report.rules} axiom_len={report.axiom_len} ratio={report.ratio:.3f}",
        file=sys.stderr,
    )
    return 0


def _cmd_decompress(args) -> int:
    stream, close_in = _open_input(args.input)
    try:
        reader = ZslpReader(stream)
        pairs = list(reader.iter_rules())
        axiom = reader.read_axiom()
    finally:
        if close_in:
            stream.close()
    slp = Slp.from_pairs(pairs, axiom)
    out, close_out = _open_output(args.output)
    try:
        for chunk in iter_expand(slp):
            out.write(chunk)
        out.flush()
    finally:
        if close_out:
            out.close()
    return 0


def _cmd_count(args) -> int:
    fsa = compile_pattern(args.pattern)
    stream, close_in = _open_input(args.input)
    try:
        reader = ZslpReader(stream)
        total = run_count(reader.iter_rules(), reader.read_axiom, fsa)
    finally:
        if close_in:
            stream.close()
    sys.stdout.write(f"{total}\n")
    sys.stdout.flush()
    return 0 if total > 0 else 1


def _cmd_search(args) -> int:
    fsa = compile_pattern(args.pattern)
    stream, close_in = _open_input(args.input)
    try:
        reader = ZslpReader(stream)
        pairs = list(reader.iter_rules())
        axiom = reader.read_axiom()
    finally:
        if close_in:
            stream.close()
    slp = Slp.from_pairs(pairs, axiom)
    emitted = report_matching_lines(
        slp, fsa, sys.stdout.buffer, prune=not args.no_prune
    )
    sys.stdout.buffer.flush()
    return 0 if emitted > 0 else 1


def _cmd_stats(args) -> int:
    fsa = compile_pattern(args.pattern)
    stream, close_in = _open_input(args.input)
    try:
        reader = ZslpReader(stream)
        pairs = list(reader.iter_rules())
        axiom = reader.read_axiom()
    finally:
        if close_in:
            stream.close()
    stats = collect_stats(Slp.from_pairs(pairs, axiom), fsa)
    if args.json:
        payload = {
            "states": stats.s,
            "states_cubed": stats.s**3,
            "states_squared": stats.s**2,
            "rules": stats.p,
            "axiom_len": stats.axiom_len,
            "rule_percentiles": {str(k): v for k, v in stats.rule_percentiles.items()},
            "axiom_percentiles": {
                str(k): v for k, v in stats.axiom_percentiles.items()
            },
            "measured_ops": stats.measured_ops,
        }
        sys.stdout.write(json.dumps(payload) + "\n")
    else:
        sys.stdout.write(
            f"automaton states: s={stats.s}  s^3={stats.s ** 3}  s^2={stats.s ** 2}\n"
            f"grammar: rules={stats.p}  axiom_len={stats.axiom_len}\n"
        )

        def row(label, percentiles):
            cells = "  ".join(f"p{k}={v}" for k, v in percentiles.items())
            return f"{label}: {cells}\n"

        sys.stdout.write(row("per-rule ops", stats.rule_percentiles))
        sys.stdout.write(row("per-axiom-symbol ops", stats.axiom_percentiles))
        sys.stdout.write(f"measured ops: {stats.measured_ops}\n")
    sys.stdout.flush()
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zslp",
        description="Search RePair-compressed text without decompressing it.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_compress = sub.add_parser("compress", help="bytes -> ZSLP")
    p_compress.add_argument("input", nargs="?", default=None)
    p_compress.add_argument("-o", "--output", default=None)
    p_compress.set_defaults(func=_cmd_compress)

    p_decompress = sub.add_parser("decompress", help="ZSLP -> bytes")
    p_decompress.add_argument("input", nargs="?", default=None)
    p_decompress.add_argument("-o", "--output", default=None)
    p_decompress.set_defaults(func=_cmd_decompress)

    p_count = sub.add_parser("count", help="print the number of matching lines")
    p_count.add_argument("-e", "--pattern", required=True)
    p_count.add_argument("input", nargs="?", default=None)
    p_count.set_defaults(func=_cmd_count)

    p_search = sub.add_parser("search", help="print the matching lines")
    p_search.add_argument("-e", "--pattern", required=True)
    p_search.add_argument("input", nargs="?", default=None)
    p_search.add_argument(
        "--no-prune", action="store_true", help=argparse.SUPPRESS
    )
    p_search.set_defaults(func=_cmd_search)

    p_stats = sub.add_parser("stats", help="operation-count percentiles")
    p_stats.add_argument("-e", "--pattern", required=True)
    p_stats.add_argument("input", nargs="?", default=None)
    p_stats.add_argument("--json", action="store_true")
    p_stats.set_defaults(func=_cmd_stats)

    return parser


def run_cli(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except PatternSyntaxError as exc:
        print(f"zslp: pattern error: {exc}", file=sys.stderr)
        return 2
    except NewlinePatternError as exc:
        print(f"zslp: pattern error: {exc}", file=sys.stderr)
        return 2
    except SlpFormatError as exc:
        print(f"zslp: format error: {exc}", file=sys.stderr)
        return 2
    except InvalidGrammarError as exc:
        print(f"zslp: grammar error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"zslp: io error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run_cli())
