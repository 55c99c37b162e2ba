"""Command line entry point.

Exit codes: 0 everything passed, 1 a verification failed, 2 usage or parse
error, 3 an internal invariant broke.
"""
from __future__ import annotations

import argparse
import sys

from . import dsl
from .errors import ChowError, UsageError
from .report import Report
from .runner import error_item, run
from .suites import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


def exit_code(report: Report) -> int:
    kinds = {(i.witness or {}).get("kind") for i in report.items if i.status == "error"}
    if kinds & {"invariant", "internal"}:
        return EXIT_INTERNAL
    if kinds:
        return EXIT_USAGE
    if any(i.status == "fail" for i in report.items):
        return EXIT_FAIL
    return EXIT_OK


def parse_param(text: str) -> tuple[str, int | str]:
    key, sep, value = text.partition("=")
    if not sep or not key:
        raise argparse.ArgumentTypeError(f"expected k=v, got {text!r}")
    try:
        return key, int(value)
    except ValueError:
        return key, value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chowcalc", description="Exact Chow ring computations.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a .chow program")
    p_run.add_argument("file")
    p_run.add_argument("--json", action="store_true")

    p_verify = sub.add_parser("verify", help="run a verification suite ('all' for every suite)")
    p_verify.add_argument("suite")
    p_verify.add_argument("--param", action="append", type=parse_param, default=[], metavar="K=V")
    p_verify.add_argument("--json", action="store_true")

    sub.add_parser("suites", help="list the verification suites")

    p_fmt = sub.add_parser("fmt", help="print a .chow program in canonical form")
    p_fmt.add_argument("file")
    return parser


def _emit(report: Report, as_json: bool) -> int:
    sys.stdout.write(report.to_json() + "\n" if as_json else report.to_text())
    return exit_code(report)


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "suites":
            for name, suite in SUITES.items():
                print(f"{name:28} {', '.join(suite.params()) or '-':22} {suite.summary}")
            return EXIT_OK
        if args.command == "fmt":
            sys.stdout.write(dsl.format_program(dsl.parse(_read(args.file))))
            return EXIT_OK
        if args.command == "run":
            return _emit(run(dsl.parse(_read(args.file))), args.json)
        if args.command == "verify":
            params = dict(args.param)
            report = Report()
            try:
                report.extend(run_suite(args.suite, params or None))
            except UsageError:
                raise
            except Exception as exc:  # noqa: BLE001  reported with exit code 3
                report.extend([error_item(f"verify {args.suite}", exc)])
            return _emit(report, args.json)
    except ChowError as exc:
        print(f"chowcalc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
