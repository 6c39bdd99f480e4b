"""Command-line entry point: ``cyclo6 <command> ...``.

Exit codes: 0 clean, 2 usage error, 3 order-6 almost difference set found,
4 internal inconsistency (direct count and closed form or fast path disagree).
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from . import __version__, reports
from .distance import C, C_PRIME, VARIANTS
from .field_core import CalibrationError, CyclotomyError

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_COUNTEREXAMPLE = 3
EXIT_INCONSISTENT = 4

ENV_OUTPUT_DIR = "CYCLO6_OUTPUT_DIR"
ENV_JOBS = "CYCLO6_JOBS"


def _index_list(text):
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _variant(text):
    aliases = {"C": C, "C'": C_PRIME, "Cprime": C_PRIME, "C-prime": C_PRIME}
    if text not in aliases:
        raise argparse.ArgumentTypeError("variant must be C or C'")
    return aliases[text]


def _positive(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--format", choices=["human", "json", "csv"], default="human")
    fmt.add_argument("--json", dest="format", action="store_const", const="json")
    fmt.add_argument("--csv", dest="format", action="store_const", const="csv")
    common.add_argument("-o", "--output", type=Path, help="write the report here instead of stdout")
    common.add_argument("-j", "--jobs", type=_positive, default=None,
                        help=f"worker processes (env {ENV_JOBS}, default 1)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="cyclo6", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"cyclo6 {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classes", parents=[common], help="list cyclotomic classes")
    p.add_argument("p", type=int)
    p.add_argument("d", type=int)
    p.add_argument("--full", action="store_true", help="print every class member")

    p = sub.add_parser("cyclo-numbers", parents=[common], help="cyclotomic number table")
    p.add_argument("p", type=int)
    p.add_argument("d", type=int)
    p.add_argument("--mode", choices=["oracle", "formula", "both"], default="both")

    p = sub.add_parser("verify-formulas", parents=[common],
                       help="check every order-6 closed form against direct counts")
    p.add_argument("range", help="P or LO..HI")
    p.add_argument("--min-primes", type=_positive, default=25,
                   help="primes per m mod 3 class required before recording a correction")

    p = sub.add_parser("search", parents=[common], help="exhaustive DHM sweep")
    p.add_argument("range", help="P or LO..HI")
    p.add_argument("--order", type=int, default=6)
    p.add_argument("--k", type=_positive, action="append", help="cardinality (repeatable)")
    p.add_argument("--all-k", action="store_true", help="every cardinality 1..d-1 (default)")
    p.add_argument("--variant", type=_variant, action="append")
    p.add_argument("--both-variants", action="store_true", help="C and C' (default)")
    pair = p.add_mutually_exclusive_group()
    pair.add_argument("--mixed", dest="mixed", action="store_true", default=True,
                      help="pair index sets of any cardinalities (default)")
    pair.add_argument("--same-k", dest="mixed", action="store_false",
                      help="only pair index sets of equal cardinality")
    p.add_argument("--modulus", type=_positive,
                   help="sweep primes = 1 mod this (default 12 for order 6, else the order)")
    p.add_argument("--rows", action="store_true", help="include every row, not only hits")
    p.add_argument("--out-dir", type=Path,
                   help=f"checkpoint directory, one file per prime (env {ENV_OUTPUT_DIR})")
    p.add_argument("--resume", action="store_true", help="reuse per-prime files in --out-dir")

    p = sub.add_parser("acf", parents=[common], help="autocorrelation of a DHM sequence")
    p.add_argument("p", type=int)
    p.add_argument("--I", dest="I", type=_index_list, required=True)
    p.add_argument("--J", dest="J", type=_index_list, required=True)
    p.add_argument("--variant", type=_variant, default=C)
    p.add_argument("--order", type=int, default=6)

    p = sub.add_parser("lemma8", parents=[common], help="classify the canonical order-6 pair")
    p.add_argument("p", type=int)
    p.add_argument("--variant", type=_variant, default=C)

    p = sub.add_parser("check-fast-path", parents=[common],
                       help="compare class-route spectra with direct counting")
    p.add_argument("range", help="P or LO..HI")
    p.add_argument("--order", type=int, default=6)
    p.add_argument("--sample", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--full-below", type=int, default=100)
    return parser


def _jobs(args):
    if args.jobs is not None:
        return args.jobs
    env = os.environ.get(ENV_JOBS)
    return max(1, int(env)) if env else 1


def run(args) -> tuple[dict, int]:
    cmd = args.command
    if cmd == "classes":
        return reports.classes_report(args.p, args.d, args.full), EXIT_OK
    if cmd == "cyclo-numbers":
        rep = reports.cyclo_numbers_report(args.p, args.d, args.mode)
        return rep, EXIT_INCONSISTENT if rep["result"]["mismatches"] else EXIT_OK
    if cmd == "verify-formulas":
        lo, hi = reports.parse_range(args.range)
        return reports.verify_formulas_report(lo, hi, _jobs(args), args.min_primes), EXIT_OK
    if cmd == "search":
        lo, hi = reports.parse_range(args.range)
        if args.k and args.all_k:
            raise ValueError("--k and --all-k are exclusive")
        if args.k and any(k >= args.order for k in args.k):
            raise ValueError(f"--k values must be below the order {args.order}")
        variants = VARIANTS if (args.both_variants or not args.variant) else args.variant
        out_dir = args.out_dir or (Path(os.environ[ENV_OUTPUT_DIR]) if os.environ.get(ENV_OUTPUT_DIR) else None)
        rep = reports.search_report(
            lo, hi, d=args.order, k_values=args.k, variants=variants, mixed=args.mixed,
            rows=args.rows, jobs=_jobs(args), modulus=args.modulus, out_dir=out_dir,
            resume=args.resume,
        )
        return rep, EXIT_COUNTEREXAMPLE if rep["result"]["counterexample"] else EXIT_OK
    if cmd == "acf":
        return reports.acf_report(args.p, args.I, args.J, args.variant, args.order), EXIT_OK
    if cmd == "lemma8":
        return reports.lemma8_report(args.p, args.variant), EXIT_OK
    if cmd == "check-fast-path":
        lo, hi = reports.parse_range(args.range)
        rep = reports.fast_path_report(lo, hi, args.order, args.sample, args.seed, _jobs(args),
                                       args.full_below)
        return rep, EXIT_INCONSISTENT if rep["result"]["mismatch_count"] else EXIT_OK
    raise AssertionError(cmd)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        report, code = run(args)
    except CalibrationError as exc:
        print(f"cyclo6: error: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except (CyclotomyError, ValueError) as exc:
        print(f"cyclo6: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = reports.render(report, args.format)
    if args.output:
        args.output.parent.mkdir(parents=True, exist_ok=True)
        args.output.write_text(text)
    else:
        sys.stdout.write(text)
    if code == EXIT_COUNTEREXAMPLE:
        print("cyclo6: COUNTEREXAMPLE: an order-6 DHM support is an (almost) difference set",
              file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
