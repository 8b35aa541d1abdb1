"""Command-line front end.

    syntaxdepth analyze MAP [--root R] [--format text|csv|json]
    syntaxdepth dvalue MAP --space S [--root R]
    syntaxdepth site-score MAP [--top N]
    syntaxdepth hotelling --l L --a A --b B --c C [--mode closed|numeric|both]

Exit codes: 0 ok, 1 parse, input or usage failure, 2 disconnected graph,
3 unknown space or root, 4 invalid market parameters, 5 solver did not converge.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Callable

from . import __version__
from .graph import (
    CENTRAL_ABOVE,
    DEFAULT_ROOT,
    END_OF_SETTLEMENT_BELOW,
    DegenerateGraph,
    Disconnected,
    EmptyGraph,
    RootMissing,
    SpatialGraph,
    UnknownSpace,
    build_graph,
    site_score,
    syntax_report,
)
from .hotelling import (
    DEFAULT_MAX_ITER,
    DEFAULT_TOL,
    InvalidMarket,
    MarketConfig,
    NoConvergence,
    best_response_solve,
    equilibrium,
)
from .mapfile import EmptyInput, MapFileError, read_map, to_edge_list

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_DISCONNECTED = 2
EXIT_UNKNOWN_SPACE = 3
EXIT_INVALID_MARKET = 4
EXIT_NO_CONVERGENCE = 5


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


# --------------------------------------------------------------------------
# rendering


def _meta(digest: str, with_timestamp: bool) -> dict[str, Any]:
    meta = {"tool": "syntaxdepth", "version": __version__, "input_sha256": digest}
    if with_timestamp:
        meta["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return meta


def _csv(header: list[str], rows: list[list[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows([[repr(v) if isinstance(v, float) else v for v in r] for r in rows])
    return buf.getvalue()


def _f2(v: float) -> str:
    return f"{v:.2f}"


def emit(args: argparse.Namespace, result: dict[str, Any], digest: str,
         text: Callable[[dict], str], table: Callable[[dict], tuple[list, list]]) -> str:
    """Render one result in the requested format.

    The text and CSV renderers read from the same result dict as JSON does.
    JSON always carries a meta block (without timestamp under --no-meta);
    text gets a trailing meta comment unless --no-meta; CSV never does.
    """
    meta = _meta(digest, with_timestamp=not args.no_meta)
    if args.format == "json":
        return json.dumps({"meta": meta, "result": result}, indent=2) + "\n"
    if args.format == "csv":
        return _csv(*table(result))
    out = text(result)
    if not args.no_meta:
        out += "# " + " ".join(f"{k}={v}" for k, v in meta.items()) + "\n"
    return out


def _warn(message: str) -> None:
    print(f"warning: {message}", file=sys.stderr)


# --------------------------------------------------------------------------
# map loading


def load_graph(path: str, root: str, input_format: str | None, strict: bool) -> tuple[SpatialGraph, str]:
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise CliError(EXIT_PARSE, f"cannot read {path}: {exc.strerror}") from None
    digest = hashlib.sha256(raw).hexdigest()
    try:
        facts, diag = read_map(path, input_format, strict=strict)
    except EmptyInput as exc:
        for _, msg in exc.diagnostics.errors:
            print(f"{path}: {msg}", file=sys.stderr)
        raise CliError(EXIT_PARSE, f"{path}: {exc}") from None
    except (MapFileError, UnicodeDecodeError) as exc:
        raise CliError(EXIT_PARSE, f"{path}: {exc}") from None
    for _, msg in diag.errors:
        _warn(f"{path}: skipped: {msg}")
    try:
        g = build_graph(to_edge_list(facts), root)
    except EmptyGraph as exc:
        raise CliError(EXIT_PARSE, f"{path}: {exc}") from None
    except RootMissing as exc:
        raise CliError(EXIT_UNKNOWN_SPACE, str(exc)) from None
    return g, digest


def _report(g: SpatialGraph):
    try:
        return syntax_report(g)
    except (Disconnected, DegenerateGraph) as exc:
        raise CliError(EXIT_DISCONNECTED, str(exc)) from None


# --------------------------------------------------------------------------
# commands


def cmd_analyze(args: argparse.Namespace) -> str:
    g, digest = load_graph(args.map, args.root, args.input_format, args.strict)
    rep = _report(g)
    result = {
        "root": rep.root,
        "md_o": rep.md_o,
        "max_depth": rep.max_depth,
        "space_count": rep.space_count_excluding_root,
        "spaces": [
            {"space": r.space, "depth_from_outside": r.depth_from_outside,
             "d_value": r.d_value}
            for r in rep.rows
        ],
    }

    def text(res: dict) -> str:
        width = max(len(s["space"]) for s in res["spaces"])
        lines = [
            f"root: {res['root']}",
            f"spaces (excluding root): {res['space_count']}",
            f"max depth: {res['max_depth']}",
            f"MD_o: {_f2(res['md_o'])}",
            "",
            f"{'space':<{width}}  D_o  d-value",
        ]
        lines += [
            f"{s['space']:<{width}}  {s['depth_from_outside']:>3}  {_f2(s['d_value']):>7}"
            for s in res["spaces"]
        ]
        return "\n".join(lines) + "\n"

    def table(res: dict):
        return (["space", "depth_from_outside", "d_value", "md_o"],
                [[s["space"], s["depth_from_outside"], s["d_value"], res["md_o"]]
                 for s in res["spaces"]])

    return emit(args, result, digest, text, table)


def cmd_dvalue(args: argparse.Namespace) -> str:
    g, digest = load_graph(args.map, args.root, args.input_format, args.strict)
    if args.space not in g:
        raise CliError(EXIT_UNKNOWN_SPACE, f"unknown space {args.space!r}")
    if args.space == g.root:
        raise CliError(EXIT_UNKNOWN_SPACE, f"{args.space!r} is the root and has no d-value")
    rep = _report(g)
    row = rep.row(args.space)
    result = {
        "space": row.space,
        "depth_from_outside": row.depth_from_outside,
        "md_o": rep.md_o,
        "d_value": row.d_value,
    }

    def text(res: dict) -> str:
        return (f"{res['space']}: D_o={res['depth_from_outside']} "
                f"MD_o={_f2(res['md_o'])} d-value={_f2(res['d_value'])}\n")

    def table(res: dict):
        keys = ["space", "depth_from_outside", "md_o", "d_value"]
        return keys, [[res[k] for k in keys]]

    return emit(args, result, digest, text, table)


def cmd_site_score(args: argparse.Namespace) -> str:
    if args.top < 1:
        raise CliError(EXIT_PARSE, "--top must be >= 1")
    g, digest = load_graph(args.map, args.root, args.input_format, args.strict)
    ranked = site_score(_report(g), args.band_low, args.band_high)[: args.top]
    result = {
        "root": g.root,
        "top": args.top,
        "ranking": [
            {"rank": i, "space": s.space, "score": s.score, "d_value": s.d_value,
             "band": s.band}
            for i, s in enumerate(ranked, start=1)
        ],
    }

    def text(res: dict) -> str:
        width = max(len(s["space"]) for s in res["ranking"])
        lines = [f"{'rank':>4}  {'space':<{width}}  score  d-value  band"]
        lines += [
            f"{s['rank']:>4}  {s['space']:<{width}}  {_f2(s['score'])}  "
            f"{_f2(s['d_value']):>7}  {s['band']}"
            for s in res["ranking"]
        ]
        return "\n".join(lines) + "\n"

    def table(res: dict):
        keys = ["rank", "space", "score", "d_value", "band"]
        return keys, [[s[k] for k in keys] for s in res["ranking"]]

    return emit(args, result, digest, text, table)


_HOTELLING_KEYS = ["p1", "p2", "x", "y", "q1", "q2", "pi1", "pi2", "valid", "violations"]


def cmd_hotelling(args: argparse.Namespace) -> str:
    try:
        market = MarketConfig(args.l, args.a, args.b, args.c)
    except InvalidMarket as exc:
        raise CliError(EXIT_INVALID_MARKET, f"invalid market parameters: {exc}") from None
    solutions: dict[str, dict] = {}
    if args.mode in ("closed", "both"):
        solutions["closed"] = equilibrium(market).as_dict()
    if args.mode in ("numeric", "both"):
        try:
            eq = best_response_solve(market, tol=args.tol, max_iter=args.max_iter)
        except NoConvergence as exc:
            raise CliError(EXIT_NO_CONVERGENCE, str(exc)) from None
        solutions["numeric"] = eq.as_dict() | {"iterations": eq.iterations}
    result: dict[str, Any] = {"mode": args.mode, **solutions}
    if args.mode == "both":
        result["max_price_discrepancy"] = max(
            abs(solutions["closed"][k] - solutions["numeric"][k]) for k in ("p1", "p2")
        )
    digest = hashlib.sha256(
        json.dumps([args.l, args.a, args.b, args.c, args.mode]).encode()
    ).hexdigest()

    def text(res: dict) -> str:
        lines = [f"l={args.l:g} a={args.a:g} b={args.b:g} c={args.c:g}"]
        for name in ("closed", "numeric"):
            if name not in res:
                continue
            sol = res[name]
            nums = " ".join(f"{k}={_f2(sol[k])}" for k in _HOTELLING_KEYS[:8])
            status = "valid" if sol["valid"] else "INVALID: " + ", ".join(sol["violations"])
            extra = f" iterations={sol['iterations']}" if "iterations" in sol else ""
            lines.append(f"{name}: {nums} {status}{extra}")
        if "max_price_discrepancy" in res:
            lines.append(f"max price discrepancy: {res['max_price_discrepancy']:.3g}")
        return "\n".join(lines) + "\n"

    def table(res: dict):
        rows = []
        for name in ("closed", "numeric"):
            if name in res:
                sol = res[name]
                rows.append([name] + [
                    ";".join(sol[k]) if k == "violations" else sol[k]
                    for k in _HOTELLING_KEYS
                ])
        return ["solver"] + _HOTELLING_KEYS, rows

    return emit(args, result, digest, text, table)


# --------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors, which would collide with EXIT_DISCONNECTED.
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="syntaxdepth",
        description="Depth, mean depth and d-value of axial maps; Hotelling duopoly solver.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=["text", "csv", "json"], default="text",
                        help="output format (default: text)")
    common.add_argument("--no-meta", action="store_true",
                        help="omit the timestamp so output is reproducible")
    maps = _Parser(add_help=False)
    maps.add_argument("map", help="map file (.pl connected/3 facts or .csv edge list)")
    maps.add_argument("--root", default=DEFAULT_ROOT, help="root space (default: outside)")
    maps.add_argument("--input-format", choices=["prolog", "csv"],
                      help="override format detection by file extension")
    maps.add_argument("--strict", action="store_true",
                      help="reject whitespace inside facts")

    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", parents=[common, maps],
                       help="depth from root, MD_o and d-value per space")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("dvalue", parents=[common, maps], help="d-value of one space")
    p.add_argument("--space", required=True)
    p.set_defaults(func=cmd_dvalue)

    p = sub.add_parser("site-score", parents=[common, maps],
                       help="rank spaces by closeness of d-value to 1")
    p.add_argument("--top", type=int, default=10)
    p.add_argument("--band-low", type=float, default=END_OF_SETTLEMENT_BELOW,
                   help="d-values below this are 'end-of-settlement'")
    p.add_argument("--band-high", type=float, default=CENTRAL_ABOVE,
                   help="d-values above this are 'central'")
    p.set_defaults(func=cmd_site_score)

    p = sub.add_parser("hotelling", parents=[common],
                       help="linear-city duopoly equilibrium")
    for name, helptext in [("l", "line length"), ("a", "store A distance from left end"),
                           ("b", "store B distance from right end"),
                           ("c", "transport cost per unit distance")]:
        p.add_argument(f"--{name}", type=float, required=True, help=helptext)
    p.add_argument("--mode", choices=["closed", "numeric", "both"], default="closed")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL,
                   help="numeric solver: stop when prices move less than this")
    p.add_argument("--max-iter", type=int, default=DEFAULT_MAX_ITER,
                   help="numeric solver: give up after this many rounds")
    p.set_defaults(func=cmd_hotelling)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        sys.stdout.write(args.func(args))
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except UnknownSpace as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN_SPACE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
