"""Command line entry point: ``baergeom verify ...`` and ``baergeom replay ...``."""

from __future__ import annotations

import argparse
import json
import sys

from .gf import FieldError, parse_modulus
from .projgeom import GeometryError
from .verify import SUITES, UsageError, make_setup, replay, run_suite

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="baergeom", description="Exhaustive checks of ruled cubic surfaces and Baer subplanes.")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--q", type=int, required=True, help="field order (3, 4, 5, 7, 8 or 9)")
    v.add_argument("--poly", type=parse_modulus, default=None, help="GF(q) modulus as low-to-high coefficients c0,c1,...")
    v.add_argument("--sigma", choices=("identity", "random"), default="identity")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--trials", type=int, default=100)
    v.add_argument("--suite", choices=SUITES, required=True)
    v.add_argument("--out", help="write the JSON report here instead of stdout")
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--timing", action="store_true", help="record elapsed_ms (makes reports run-dependent)")

    r = sub.add_parser("replay", help="re-evaluate a witness or all witnesses of a report")
    r.add_argument("--witness", required=True)
    return parser


def _verify(args) -> int:
    if args.jobs < 1:
        raise UsageError("--jobs must be >= 1")
    setup = make_setup(args.q, args.poly, args.sigma, args.seed)
    report = run_suite(args.suite, setup, trials=args.trials, jobs=args.jobs, timing=args.timing)
    text = report.to_json()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    status = "PASS" if report.passed else f"FAIL ({len(report.violations)} violations)"
    print(f"{args.suite} q={args.q}: {status}", file=sys.stderr)
    return EXIT_PASS if report.passed else EXIT_FAIL


def _replay(args) -> int:
    try:
        with open(args.witness) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read witness: {exc}") from None
    results = replay(doc)
    sys.stdout.write(json.dumps(results, sort_keys=True, indent=2) + "\n")
    return EXIT_FAIL if any(r["failed"] for r in results) else EXIT_PASS


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            return _verify(args)
        return _replay(args)
    except (UsageError, FieldError, GeometryError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
