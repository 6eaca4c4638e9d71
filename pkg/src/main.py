"""
Command-line entry point for computing, auditing and characterizing information measures.

Subcommands:
- compute       value of a built-in measure on a distribution file
- audit         randomized axiom audit of a built-in or expression-backed measure
- characterize  recover the constant c with m = c * reference
- profile       S_q (or D_q for pairs) over a range of q, written as CSV

Exit codes: 0 success, 1 audit or characterization failure, 2 usage or validation error.
"""

import argparse
import logging
import sys

from audit.auditor import AXIOMS
from audit.handles import BUILTIN_MEASURES
from characterization.characterization import METHODS
from dsl.parser import DslSyntaxError
from measures.errors import InfoMeasureError
from runner.runner import METHOD_KINDS, Runner
from utils.config import AuditConfig, default_seed
from utils.utils import EXIT_USAGE

logger = logging.getLogger("main")


def _measure_arguments(parser):
    parser.add_argument("measure", nargs="?", help=f"built-in measure: {', '.join(BUILTIN_MEASURES)} or zero")
    parser.add_argument("--dsl", help="measure written as an expression in p, r and q")
    parser.add_argument("--dsl-file", help="file holding the measure expression")
    parser.add_argument("--kind", choices=("entropy", "divergence"), help="kind of an expression-backed measure")
    parser.add_argument("--q", type=float, help="deformation parameter q")


def _sampling_arguments(parser):
    parser.add_argument("--trials", type=int, help="number of seeded trials")
    parser.add_argument("--max-n", type=int, help="largest sampled distribution length")
    parser.add_argument("--tol", type=float, help="pass tolerance on residuals")
    parser.add_argument("--seed", type=int, help="base seed (default: $INFOMEASURE_SEED or 0)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="infomeasure", description=__doc__.strip().splitlines()[0])
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG")
    sub = parser.add_subparsers(dest="command", required=True)

    compute = sub.add_parser("compute", help="value of a built-in measure")
    compute.add_argument("measure", choices=BUILTIN_MEASURES)
    compute.add_argument("input", help='JSON file {"p": [...], "r": [...]}')
    compute.add_argument("--q", type=float)

    audit = sub.add_parser("audit", help="randomized axiom audit")
    _measure_arguments(audit)
    _sampling_arguments(audit)
    audit.add_argument("--axioms", help=f"comma-separated subset of: {', '.join(AXIOMS)}")
    audit.add_argument("--max-blocks", type=int, help="largest number of chain-rule blocks")
    audit.add_argument("--zero-prob", type=float, help="probability of a sampled zero pattern")
    audit.add_argument("--report", help="path of the JSON audit report")
    audit.add_argument("--workers", type=int, help="threads used to run trials")
    audit.add_argument("--progress", action="store_true", help="show a progress bar per axiom")

    characterize = sub.add_parser("characterize", help="recover the characterization constant")
    _measure_arguments(characterize)
    _sampling_arguments(characterize)
    characterize.add_argument("--method", choices=METHODS, default="fit")

    profile = sub.add_parser("profile", help="q-profile of a distribution or pair as CSV")
    profile.add_argument("input")
    profile.add_argument("--q-from", type=float, required=True)
    profile.add_argument("--q-to", type=float, required=True)
    profile.add_argument("--steps", type=int, required=True)
    profile.add_argument("--out", help="CSV path (default: stdout)")
    return parser


def _config(args) -> AuditConfig:
    seed = args.seed if getattr(args, "seed", None) is not None else default_seed()
    return AuditConfig(seed=seed).replace(
        trials=getattr(args, "trials", None),
        max_n=getattr(args, "max_n", None),
        max_blocks=getattr(args, "max_blocks", None),
        tol=getattr(args, "tol", None),
        zero_prob=getattr(args, "zero_prob", None),
        workers=getattr(args, "workers", None),
        progress=getattr(args, "progress", None) or None,
    ).validate()


def run(args) -> int:
    if args.command == "compute":
        return Runner().compute(args.measure, args.input, q=args.q)
    if args.command == "profile":
        return Runner().profile(args.input, args.q_from, args.q_to, args.steps, args.out)

    runner = Runner(_config(args))
    if args.command == "audit":
        handle = runner.resolve_measure(args.measure, args.dsl, args.dsl_file, args.kind, args.q)
        return runner.audit(handle, args.axioms, q=args.q, report_path=args.report)

    kind = args.kind
    if kind is None and (args.dsl is not None or args.dsl_file is not None or args.measure == "zero"):
        kind = METHOD_KINDS[args.method]
    handle = runner.resolve_measure(args.measure, args.dsl, args.dsl_file, kind, args.q)
    return runner.characterize(handle, args.method, q=args.q)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE

    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s",
                        stream=sys.stderr, force=True)

    try:
        return run(args)
    except DslSyntaxError as exc:
        print(exc.render(), file=sys.stderr)
        return EXIT_USAGE
    except InfoMeasureError as exc:
        logger.debug("usage error", exc_info=True)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OverflowError as exc:
        print(f"error: value out of float range ({exc})", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
