"""Command-line front end.

Reads one network specification, evaluates ``go(...)`` queries against
it, and prints one tab-separated verdict line per query.  Exit status:

    0  every query evaluated
    1  the specification or a query did not parse / validate
    2  the specification file could not be read (argparse errors too)
    3  a search hit a zone or time limit and gave up
    4  self-test found configurations disagreeing on a verdict
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional

from .explorer import ExploreResult, SearchOptions, Verdict, explore
from .model import Network, Query, ValidationError
from .parser import ParseError, parse_query, parse_spec

OK, BAD_INPUT, NO_FILE, GAVE_UP, DIVERGED = 0, 1, 2, 3, 4


def _build_argparser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="zonereach",
        description="Zone-based reachability checking for networks of timed automata.",
    )
    p.add_argument("spec", help="network specification file")
    p.add_argument("--backend", choices=("dbm", "formula"), default="dbm")
    p.add_argument("--order", choices=("dfs", "bfs"), default="dfs")
    p.add_argument("--subsume", choices=("equal", "include"), default=None,
                   help="visited-state pruning (default: include)")
    p.add_argument("--no-extrapolate", action="store_true",
                   help="disable maximum-constant coarsening (termination not guaranteed)")
    p.add_argument("--faithful", action="store_true",
                   help="equality pruning and no coarsening")
    p.add_argument("--stats", action="store_true", help="print a stats line per query")
    p.add_argument("--witness", action="store_true",
                   help="print the label sequence for reachable targets")
    p.add_argument("--max-zones", type=int, default=None, metavar="N",
                   help="give up after storing N zones")
    p.add_argument("--timeout", type=float, default=None, metavar="S",
                   help="give up after S seconds per query")
    p.add_argument("--query", action="append", default=[], metavar="TEXT",
                   help="inline query; repeatable")
    p.add_argument("--queries", default=None, metavar="FILE",
                   help="file with one query per line")
    p.add_argument("--selftest", action="store_true",
                   help="run every query under both backends and both orders "
                        "and report agreement")
    return p


def _search_options(args) -> SearchOptions:
    subsume = args.subsume
    extrapolate = not args.no_extrapolate
    if args.faithful:
        if subsume == "include":
            raise ValueError("--faithful requires equality pruning; drop --subsume include")
        subsume = "equal"
        extrapolate = False
    return SearchOptions(
        backend=args.backend,
        order=args.order,
        subsumption=subsume or "include",
        extrapolate=extrapolate,
        max_zones=args.max_zones,
        max_seconds=args.timeout,
    )


def _query_lines(args) -> list[str]:
    lines: list[str] = list(args.query)
    if args.queries is not None:
        lines.extend(Path(args.queries).read_text().splitlines())
    if not args.query and args.queries is None:
        lines.extend(sys.stdin.read().splitlines())
    cleaned = []
    for line in lines:
        stripped = line.split("//", 1)[0].strip()
        if stripped:
            cleaned.append(stripped)
    return cleaned


def _print_diagnostics(prefix: str, err: Exception) -> None:
    if isinstance(err, ParseError):
        for d in err.diagnostics:
            print(f"{prefix}: {d}", file=sys.stderr)
    elif isinstance(err, ValidationError):
        for d in err.diagnostics:
            print(f"{prefix}: {d}", file=sys.stderr)
    else:
        print(f"{prefix}: {err}", file=sys.stderr)


def _selftest(net: Network, queries: list[tuple[str, Query]], base: SearchOptions) -> int:
    agreed = 0
    for text, query in queries:
        verdicts = {}
        for backend in ("dbm", "formula"):
            for order in ("dfs", "bfs"):
                options = SearchOptions(
                    backend=backend,
                    order=order,
                    subsumption=base.subsumption,
                    extrapolate=base.extrapolate,
                    max_zones=base.max_zones,
                    max_seconds=base.max_seconds,
                )
                verdicts[(backend, order)] = explore(net, query, options).verdict
        if any(v is Verdict.INCONCLUSIVE for v in verdicts.values()):
            print(f"inconclusive: {text}", file=sys.stderr)
            return GAVE_UP
        if len(set(verdicts.values())) > 1:
            print(f"divergence: {text}", file=sys.stderr)
            for (backend, order), verdict in sorted(verdicts.items()):
                print(f"  {backend}/{order}: {verdict}", file=sys.stderr)
            return DIVERGED
        agreed += 1
    print(f"agree: {agreed}/{len(queries)}")
    return OK


def main(argv: Optional[list[str]] = None) -> int:
    args = _build_argparser().parse_args(argv)
    try:
        options = _search_options(args)
    except ValueError as err:
        print(f"zonereach: {err}", file=sys.stderr)
        return BAD_INPUT

    try:
        text = Path(args.spec).read_text()
    except OSError as err:
        print(f"zonereach: cannot read {args.spec}: {err.strerror}", file=sys.stderr)
        return NO_FILE
    try:
        net = parse_spec(text)
    except (ParseError, ValidationError) as err:
        _print_diagnostics(args.spec, err)
        return BAD_INPUT

    try:
        lines = _query_lines(args)
    except OSError as err:
        print(f"zonereach: cannot read {args.queries}: {err.strerror}", file=sys.stderr)
        return NO_FILE
    queries: list[tuple[str, Query]] = []
    failed = False
    for line in lines:
        try:
            queries.append((line, parse_query(line, net)))
        except ParseError as err:
            _print_diagnostics(f"query {line!r}", err)
            failed = True
    if failed:
        return BAD_INPUT

    if args.selftest:
        return _selftest(net, queries, options)

    status = OK
    for text, query in queries:
        outcome: ExploreResult = explore(net, query, options)
        if outcome.verdict is Verdict.INCONCLUSIVE:
            print(f"zonereach: {text}: {outcome.reason}", file=sys.stderr)
            status = GAVE_UP
            continue
        print(f"{text}\t{outcome.verdict}")
        if args.witness and outcome.verdict is Verdict.REACHABLE:
            steps = " ".join(label.name for label in outcome.witness)
            print(f"# witness: {steps}" if steps else "# witness: (empty)")
        if args.stats:
            s = outcome.stats
            print(f"# stats: stored={s.stored} popped={s.popped} time={s.seconds:.2f}s")
    return status


if __name__ == "__main__":
    sys.exit(main())
