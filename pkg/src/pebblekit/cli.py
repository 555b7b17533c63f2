"""Command-line interface.

Subcommands:

* strategy  -- generate a certified strategy trace for a game instance
* validate  -- replay a trace file, report metrics/classifications, check an
               embedded certificate
* optimal   -- run the exact search oracle for the minimum peak
* verify    -- cross-check formula vs strategy (vs oracle) on one instance or
               on the built-in instance grid
* report    -- write the tightness CSV and figures to a directory
* serve     -- run the playground HTTP service

Exit codes: 0 on success, 1 when a trace is invalid, a certificate or
classification check fails, a verdict is "MISMATCH"/"error", or the oracle
hits its resource cap; 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from .bounds import (
    GATED_TIGHTNESS_GRID,
    STRETCH_TIGHTNESS_GRID,
    TightnessReport,
    UnsupportedBoundError,
    verify_tightness,
)
from .core import RationalFormatError, format_rational, parse_rational
from .oracle import DEFAULT_STATE_CAP, OracleError, ResourceCapError, optimal_peak
from .strategies import StrategyError, check_certificate, strategy_for
from .trace import (
    TraceValidationError,
    trace_from_json,
    validate_trace,
)

GAME_CHOICES = ("black", "bw", "half", "fractional")
CLASSIFICATION_CHOICES = (
    "root-pebbling",
    "sub-pebbling",
    "root-sub-pebbling",
    "sub-root-sub-pebbling",
)


def _resolve_cache(flag_value: Optional[str]) -> Optional[str]:
    """Cache directory: explicit flag wins, then PEBBLEKIT_CACHE, then none."""
    if flag_value:
        return flag_value
    env = os.environ.get("PEBBLEKIT_CACHE")
    return env or None


def _print_json(data: object) -> None:
    json.dump(data, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _fail(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return 1


# ---------------------------------------------------------------------------
# strategy


def _cmd_strategy(args: argparse.Namespace) -> int:
    try:
        epsilon = parse_rational(args.epsilon) if args.epsilon is not None else None
        generated = strategy_for(args.game, args.d, args.height, epsilon=epsilon)
    except (StrategyError, UnsupportedBoundError, RationalFormatError, ValueError) as exc:
        return _fail(str(exc))
    payload = generated.to_json()
    summary = {
        "game": generated.certificate.game,
        "kind": generated.certificate.kind,
        "d": args.d,
        "h": args.height,
        "granularity": format_rational(generated.trace.variant.granularity),
        "moves": len(generated.trace.moves),
        "peak": format_rational(generated.peak),
        "target": format_rational(generated.certificate.target),
    }
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
        summary["path"] = args.out
        if args.json:
            _print_json(summary)
        else:
            print(
                f"wrote {args.out}: {summary['kind']} strategy, d={args.d} h={args.height}, "
                f"{summary['moves']} moves, peak {summary['peak']} (target {summary['target']})"
            )
    else:
        _print_json(payload)
    return 0


# ---------------------------------------------------------------------------
# validate


def _read_trace_file(path: str) -> Dict[str, object]:
    if path == "-":
        return json.load(sys.stdin)
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _cmd_validate(args: argparse.Namespace) -> int:
    try:
        data = _read_trace_file(args.trace)
    except (OSError, json.JSONDecodeError) as exc:
        return _fail(f"cannot read trace: {exc}")
    try:
        trace = trace_from_json(data)
    except (KeyError, ValueError, TypeError) as exc:
        return _fail(f"malformed trace: {exc}")
    try:
        report = validate_trace(trace)
    except TraceValidationError as exc:
        if args.json:
            _print_json(
                {
                    "valid": False,
                    "index": exc.index,
                    "rule": exc.violation.rule,
                    "reason": exc.violation.reason,
                }
            )
        else:
            print(f"invalid: {exc}", file=sys.stderr)
        return 1

    cert_data = data.get("certificate")
    cert_result = None
    if cert_data is not None:
        try:
            cert_result = check_certificate(trace, cert_data)
        except (KeyError, ValueError, TypeError) as exc:
            return _fail(f"malformed certificate: {exc}")

    result: Dict[str, object] = {"valid": True}
    result.update(report.to_json())
    if cert_result is not None:
        result["certificate"] = {
            "ok": cert_result.ok,
            "failures": list(cert_result.failures),
            "conditions": dict(cert_result.conditions),
        }

    ok = True
    if cert_result is not None and not cert_result.ok:
        ok = False
    if args.classify is not None:
        classified = report.classifications().get(args.classify, False)
        result["requestedClassification"] = {args.classify: classified}
        if not classified:
            ok = False

    if args.json:
        _print_json(result)
    else:
        print(
            f"valid trace: {report.length} moves, peak {format_rational(report.peak)}, "
            f"final weight {format_rational(report.final_weight)}"
        )
        names = [k for k, v in report.classifications().items() if v]
        print("classifications: " + (", ".join(names) if names else "none"))
        if cert_result is not None:
            if cert_result.ok:
                print("certificate: ok")
            else:
                print("certificate: FAILED -> " + ", ".join(cert_result.failures))
        if args.classify is not None:
            verdict = "yes" if result["requestedClassification"][args.classify] else "NO"
            print(f"is {args.classify}: {verdict}")
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# optimal


def _cmd_optimal(args: argparse.Namespace) -> int:
    try:
        granularity = (
            parse_rational(args.granularity) if args.granularity is not None else None
        )
    except RationalFormatError as exc:
        return _fail(str(exc))
    try:
        report = optimal_peak(
            args.game,
            args.d,
            args.height,
            granularity=granularity,
            cache_dir=_resolve_cache(args.cache),
            state_cap=args.state_cap,
            use_seed=not args.no_seed,
        )
    except ResourceCapError as exc:
        return _fail(f"search stopped at the resource cap: {exc}")
    except (OracleError, ValueError) as exc:
        return _fail(str(exc))
    if args.json:
        _print_json(report.to_json(include_witness=not args.no_witness))
    else:
        print(
            f"{args.game} d={args.d} h={args.height} "
            f"(grid {format_rational(report.granularity)}): "
            f"optimal peak {format_rational(report.optimum)}"
        )
        print(
            f"states explored: {report.states_explored}; witness: {report.witness_source}"
            + ("; from cache" if report.from_cache else "")
        )
    return 0


# ---------------------------------------------------------------------------
# verify


def _tightness_line(r: TightnessReport) -> str:
    def fmt(x: Optional[Fraction]) -> str:
        return format_rational(x) if x is not None else "-"

    line = (
        f"{r.game:<10} d={r.d} h={r.h}: formula={fmt(r.formula)} "
        f"strategy={fmt(r.strategy_peak)} oracle={fmt(r.oracle_optimum)} "
        f"-> {r.verdict}"
    )
    if r.states_explored:
        line += f" ({r.states_explored} states, {r.wall_time_s:.1f}s)"
    if r.errors:
        line += " [" + "; ".join(r.errors) + "]"
    return line


def _cmd_verify(args: argparse.Namespace) -> int:
    try:
        granularity = (
            parse_rational(args.granularity) if args.granularity is not None else None
        )
    except RationalFormatError as exc:
        return _fail(str(exc))
    cache = _resolve_cache(args.cache)

    instances: List[tuple] = []
    if args.grid:
        for game, pairs in GATED_TIGHTNESS_GRID.items():
            for d, h in pairs:
                instances.append((game, d, h))
        if args.stretch:
            for game, pairs in STRETCH_TIGHTNESS_GRID.items():
                for d, h in pairs:
                    instances.append((game, d, h))
    else:
        if args.game is None or args.height is None:
            print("error: provide --game and --height, or use --grid", file=sys.stderr)
            return 2
        instances.append((args.game, args.d, args.height))

    reports = [
        verify_tightness(
            game,
            d,
            h,
            with_oracle=args.oracle,
            granularity=granularity,
            cache_dir=cache,
            state_cap=args.state_cap,
        )
        for game, d, h in instances
    ]
    failed = [r for r in reports if r.verdict in ("MISMATCH", "error")]
    if args.json:
        _print_json(
            {
                "reports": [r.to_json() for r in reports],
                "ok": not failed,
            }
        )
    else:
        for r in reports:
            print(_tightness_line(r))
        print(f"{len(reports) - len(failed)}/{len(reports)} instances ok")
    return 0 if not failed else 1


# ---------------------------------------------------------------------------
# report


def _parse_heights(text: str) -> List[int]:
    if ":" in text:
        lo, hi = text.split(":", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(part) for part in text.split(",") if part]


def _cmd_report(args: argparse.Namespace) -> int:
    from .report import DEFAULT_GAMES, generate_report

    games = args.games.split(",") if args.games else list(DEFAULT_GAMES)
    for game in games:
        if game not in GAME_CHOICES:
            return _fail(f"unknown game {game!r}")
    try:
        heights = _parse_heights(args.heights)
    except ValueError:
        return _fail(f"cannot parse heights {args.heights!r}; use e.g. 2:8 or 2,4,6")
    paths = generate_report(
        args.out_dir,
        d=args.d,
        heights=heights,
        games=games,
        with_oracle=args.oracle,
        cache_dir=_resolve_cache(args.cache),
        profile_height=args.profile_height,
    )
    if args.json:
        _print_json({"paths": paths})
    else:
        for path in paths:
            print(f"wrote {path}")
    return 0


# ---------------------------------------------------------------------------
# serve


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port, log_level="warning")
    return 0


# ---------------------------------------------------------------------------
# parser


def _add_instance_args(parser: argparse.ArgumentParser, required: bool = True) -> None:
    parser.add_argument("--game", choices=GAME_CHOICES, required=required, help="game kind")
    parser.add_argument("-d", type=int, default=2, help="tree arity (default 2)")
    parser.add_argument(
        "-H", "--height", type=int, required=required, help="tree height (levels)"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pebblekit",
        description="Exact pebbling games on balanced d-ary trees: strategies, "
        "search, bounds, and a playground service.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("strategy", help="generate a certified strategy trace")
    _add_instance_args(p)
    p.add_argument(
        "--epsilon",
        help="epsilon shift for the fractional sub-root construction "
        "(rational, e.g. 1/4 or -1/2)",
    )
    p.add_argument("--out", help="write the trace JSON to this file")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.set_defaults(func=_cmd_strategy)

    p = sub.add_parser("validate", help="replay and classify a trace file")
    p.add_argument("trace", help="trace JSON file, or - for stdin")
    p.add_argument(
        "--classify",
        choices=CLASSIFICATION_CHOICES,
        help="additionally require this classification (exit 1 if absent)",
    )
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("optimal", help="exact minimum peak via the search oracle")
    _add_instance_args(p)
    p.add_argument("--granularity", help="grid step for the search (rational)")
    p.add_argument("--cache", help="cache directory (default: $PEBBLEKIT_CACHE)")
    p.add_argument(
        "--state-cap",
        type=int,
        default=DEFAULT_STATE_CAP,
        help="abort after this many explored states",
    )
    p.add_argument(
        "--no-seed",
        action="store_true",
        help="search without seeding from a generated strategy",
    )
    p.add_argument(
        "--no-witness", action="store_true", help="omit the witness trace from JSON output"
    )
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.set_defaults(func=_cmd_optimal)

    p = sub.add_parser(
        "verify", help="cross-check formula vs strategy (vs oracle) for tightness"
    )
    _add_instance_args(p, required=False)
    p.add_argument(
        "--grid",
        action="store_true",
        help="run the built-in instance grid instead of a single instance",
    )
    p.add_argument(
        "--stretch",
        action="store_true",
        help="with --grid, also include the larger stretch instances",
    )
    p.add_argument("--oracle", action="store_true", help="also run the exact search")
    p.add_argument("--granularity", help="grid step for the oracle (rational)")
    p.add_argument("--cache", help="cache directory (default: $PEBBLEKIT_CACHE)")
    p.add_argument("--state-cap", type=int, default=None, help="search state cap")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("report", help="write tightness CSV and figures")
    p.add_argument("--out-dir", required=True, help="output directory")
    p.add_argument("-d", type=int, default=2, help="tree arity (default 2)")
    p.add_argument("--heights", default="2:8", help="height range lo:hi or list (default 2:8)")
    p.add_argument("--games", help="comma-separated game kinds (default all)")
    p.add_argument("--profile-height", type=int, default=6, help="height for the weight profile")
    p.add_argument("--oracle", action="store_true", help="include oracle optima")
    p.add_argument("--cache", help="cache directory (default: $PEBBLEKIT_CACHE)")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.set_defaults(func=_cmd_report)

    p = sub.add_parser("serve", help="run the playground HTTP service")
    p.add_argument("--host", default="127.0.0.1", help="bind address (default 127.0.0.1)")
    p.add_argument("--port", type=int, default=8000, help="port (default 8000)")
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
