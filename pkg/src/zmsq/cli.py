"""Command-line interface.

Exit status taxonomy: 0 success, 1 proven impossibility (payload carries the
certificate), 2 malformed input or usage error, 3 search budget exhausted.
Output is deterministic JSON (or the pretty text mirroring how the squares
are usually typeset).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import figures, oracle
from .build import build_zms, replay_trace
from .classic import integer_ms, zero_based
from .errors import BudgetError, FormatError, ImpossibleError, ZmsqError
from .groups import classify, parse_group
from .kotzig import build_kotzig
from .squares import export_blocks, load_square, render_text, verify

OK, IMPOSSIBLE, ERROR, EXHAUSTED = 0, 1, 2, 3


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True))


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _cmd_build(args) -> int:
    spec = parse_group(args.group)
    result = build_zms(spec)
    if not result.ok:
        _emit({"status": "impossible", "certificate": result.certificate.to_json()})
        return IMPOSSIBLE
    if args.format == "text":
        sys.stdout.write(render_text(result.square))
    else:
        payload = result.square.to_json()
        if args.trace:
            payload["trace"] = result.trace.to_json()
        _emit(payload)
    return OK


def _cmd_verify(args) -> int:
    square = load_square(_read_input(args.infile))
    _emit(verify(square).to_json())
    return OK


def _cmd_classify(args) -> int:
    spec = parse_group(args.group)
    _emit(classify(spec).to_json())
    return OK


def _cmd_blocks(args) -> int:
    square = load_square(_read_input(args.infile))
    _emit(export_blocks(square).to_json())
    return OK


def _cmd_classic(args) -> int:
    sq = integer_ms(args.n)
    if args.zero_based:
        sq = zero_based(sq)
    if args.format == "text":
        for row in sq.cells:
            print(" ".join(str(x) for x in row))
    else:
        _emit(sq.to_json())
    return OK


def _cmd_kotzig(args) -> int:
    spec = parse_group(args.group)
    arr = build_kotzig(spec, args.rows, group_size=args.grouped, budget=args.budget)
    _emit(arr.to_json())
    return OK


def _parse_mu(text: str):
    return [int(x) for x in text.replace("(", "").replace(")", "").split(",")]


def _cmd_oracle(args) -> int:
    spec = parse_group(args.group)
    mu = _parse_mu(args.mu) if args.mu is not None else None
    report = oracle.exhaustive_search(
        spec, args.n, mu=mu, budget=args.budget, cap=args.cap, fix_first=args.fix_first
    )
    _emit(report.to_json())
    return OK if report.exhaustive else EXHAUSTED


def _cmd_spectrum(args) -> int:
    spec = parse_group(args.group)
    report = oracle.spectrum(spec, args.n, budget=args.budget)
    _emit(report.to_json())
    return OK


def _cmd_figure(args) -> int:
    if args.list:
        _emit(figures.names())
        return OK
    sq = figures.figure(args.name)
    if args.format == "text":
        sys.stdout.write(render_text(sq))
    else:
        _emit(sq.to_json())
    return OK


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zmsq",
        description="Zero-sum magic squares over finite abelian groups.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="Construct a verified zero-sum square or a certificate.")
    p.add_argument("--group", required=True, help='e.g. "Z2xZ8" or {"moduli":[2,8]}')
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--trace", action="store_true", help="include the derivation trace")
    p.set_defaults(func=_cmd_build)

    p = sub.add_parser("verify", help="Check a square file and report all line sums.")
    p.add_argument("--in", dest="infile", required=True, help="square file (JSON or text), - for stdin")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("classify", help="Group profile: involutions, element sum, class membership.")
    p.add_argument("--group", required=True)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("blocks", help="Export the rows/columns/diagonals of a zero-sum square.")
    p.add_argument("--in", dest="infile", required=True)
    p.set_defaults(func=_cmd_blocks)

    p = sub.add_parser("classic", help="Classical integer magic square.")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--zero-based", action="store_true")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(func=_cmd_classic)

    p = sub.add_parser("kotzig", help="Kotzig array with zero column sums.")
    p.add_argument("--group", required=True)
    p.add_argument("--rows", type=int, required=True)
    p.add_argument("--grouped", type=int, default=None, help="zero-sum group size within rows")
    p.add_argument("--budget", type=int, default=10_000_000)
    p.set_defaults(func=_cmd_kotzig)

    p = sub.add_parser("oracle", help="Backtracking search for magic squares.")
    p.add_argument("--group", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mu", default=None, help="pin the magic constant, e.g. 0,6")
    p.add_argument("--budget", type=int, default=10_000_000)
    p.add_argument("--cap", type=int, default=16, help="max squares to return")
    p.add_argument("--fix-first", action="store_true", help="fix cell (0,0) to the identity")
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("spectrum", help="Explore achievable magic constants.")
    p.add_argument("--group", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--budget", type=int, default=200_000)
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("figure", help="Print an embedded reference square.")
    p.add_argument("name", nargs="?", default=None)
    p.add_argument("--list", action="store_true")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(func=_cmd_figure)

    return parser


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return ERROR if exc.code not in (0, None) else OK
    try:
        return args.func(args)
    except ImpossibleError as exc:
        payload = {"status": "impossible", "message": str(exc)}
        if exc.certificate is not None:
            payload["certificate"] = exc.certificate.to_json()
        _emit(payload)
        return IMPOSSIBLE
    except BudgetError as exc:
        _emit({"status": "budget-exhausted", "message": str(exc)})
        return EXHAUSTED
    except (FormatError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ERROR
    except ZmsqError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ERROR


def console_main() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    console_main()
