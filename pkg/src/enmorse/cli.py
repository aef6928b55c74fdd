"""Command-line interface: ``enmorse check|homology|pages|e2|compare|catalog``."""

from __future__ import annotations

import argparse
import sys

from . import catalog as fixtures
from .report import run_report
from .specfile import SpecError, dumps_canonical, emit_spec, parse_spec


def _load(path: str):
    if path == "-":
        data = sys.stdin.buffer.read()
    else:
        with open(path, "rb") as fh:
            data = fh.read()
    return parse_spec(data)


def _emit(report, fmt: str, sections) -> None:
    if fmt == "json":
        sys.stdout.write(report.to_json())
    else:
        sys.stdout.write(report.to_text(sections))


def cmd_check(args) -> int:
    spec = _load(args.spec)
    report = run_report(spec, max_page=1, cross_check=False)
    if args.format == "json":
        sys.stdout.write(dumps_canonical({"name": spec.name, "checks": report.checks, "ok": report.checks_ok}))
    else:
        sys.stdout.write(report.to_text(sections=("checks",)))
    return 0 if report.checks_ok else 1


def cmd_homology(args) -> int:
    report = run_report(_load(args.spec), max_page=1, cross_check=False)
    if args.format == "json":
        d = report.to_dict()
        keep = {k: d[k] for k in ("name", "checks", "validity_window", "homology", "truncation_artifacts") if k in d}
        sys.stdout.write(dumps_canonical(keep))
    else:
        sys.stdout.write(report.to_text(sections=("homology",)))
    return 0 if report.checks_ok else 1


def cmd_pages(args) -> int:
    report = run_report(_load(args.spec), max_page=args.max_page)
    _emit(report, args.format, ("checks", "pages"))
    return 0 if report.checks_ok and report.convergence_ok else 1


def cmd_e2(args) -> int:
    report = run_report(_load(args.spec), max_page=2)
    _emit(report, args.format, ("e2",))
    return 0 if report.checks_ok and report.e2 is not None and report.e2["ok"] else 1


def cmd_compare(args) -> int:
    report = run_report(_load(args.spec), compare=True)
    _emit(report, args.format, ("checks", "homology", "oracle", "comparison"))
    return 0 if report.ok else 1


def cmd_catalog(args) -> int:
    if args.action == "list":
        for name in fixtures.names():
            print(name)
        return 0
    if not args.name:
        print("catalog emit needs a fixture name", file=sys.stderr)
        return 2
    try:
        spec = fixtures.catalog(args.name, args.param)
    except (KeyError, ValueError) as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return 2
    sys.stdout.buffer.write(emit_spec(spec))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="enmorse", description="Enriched Morse complexes and their spectral sequences over GF(2)."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def with_spec(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("spec", help="spec file (JSON), or - for stdin")
        p.add_argument("--format", choices=("table", "json"), default="table")
        p.set_defaults(func=func)
        return p

    with_spec("check", cmd_check, "validate the spec file and the structure equation")
    with_spec("homology", cmd_homology, "homology of the total complex")
    p = with_spec("pages", cmd_pages, "spectral sequence pages, d_r ranks and stabilization")
    p.add_argument("--max-page", type=int, default=None, metavar="R")
    with_spec("e2", cmd_e2, "E^2 from fiber homology, cross-checked against the filtered complex")
    with_spec("compare", cmd_compare, "diff against the spec file's reference block")

    p = sub.add_parser("catalog", help="built-in fixtures")
    p.add_argument("action", choices=("list", "emit"))
    p.add_argument("name", nargs="?")
    p.add_argument("--param", type=int, default=None, metavar="N", help="truncation degree for s2-pathloop-N")
    p.set_defaults(func=cmd_catalog)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SpecError as exc:
        for e in exc.errors:
            print(f"error: {e}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
