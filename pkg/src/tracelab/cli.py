"""Command-line entry point: ``tracelab verify --suite <name> ...``."""

from __future__ import annotations

import argparse
import sys

from .errors import TraceLabError
from .harness import SuiteConfig, list_suites, run_suite

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def _dims(text: str):
    try:
        return tuple(int(part) for part in text.split(",") if part)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad dims list {text!r}") from exc


def _on_off(text: str) -> bool:
    if text not in ("on", "off"):
        raise argparse.ArgumentTypeError("expected 'on' or 'off'")
    return text == "on"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tracelab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    verify = sub.add_parser("verify", help="run a verification suite and emit a JSON report")
    verify.add_argument("--suite", default=None, help="suite name, or 'all'")
    verify.add_argument("--dims", type=_dims, default=(2, 4, 8), help="comma-separated dimensions")
    verify.add_argument("--arity", type=int, default=2, help="maximum tuple arity (<= 4)")
    verify.add_argument("--trials", type=int, default=500)
    verify.add_argument("--seed", type=int, default=42)
    verify.add_argument("--abs-tol", type=float, default=1e-9)
    verify.add_argument("--rel-tol", type=float, default=1e-8)
    verify.add_argument("--tensor-mode", type=_on_off, default=True, metavar="on|off")
    verify.add_argument("--report", default=None, help="also write the JSON report to this path")
    verify.add_argument("--list", action="store_true", help="list suite names and exit")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command != "verify":  # pragma: no cover - argparse enforces this
        parser.print_usage(sys.stderr)
        return EXIT_USAGE

    if args.list:
        for line in list_suites():
            print(line)
        return EXIT_PASS

    if args.suite is None:
        print("error: --suite is required (or use --list)", file=sys.stderr)
        return EXIT_USAGE

    try:
        cfg = SuiteConfig(
            suite=args.suite,
            dims=args.dims,
            tuple_arity=args.arity,
            trials=args.trials,
            seed=args.seed,
            abs_tol=args.abs_tol,
            rel_tol=args.rel_tol,
            tensor_mode=args.tensor_mode,
            report_path=args.report,
        )
        report = run_suite(cfg)
    except TraceLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: cannot write report: {exc}", file=sys.stderr)
        return EXIT_USAGE

    print(report.to_json())
    return EXIT_PASS if report.verdict == "pass" else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
