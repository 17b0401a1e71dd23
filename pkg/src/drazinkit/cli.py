"""Command line: ``drazinkit {drazin,verify,oracle,counterexample}``.

Exit codes: 0 all checks pass, 1 a mathematical check failed,
2 usage or input error.
"""

from __future__ import annotations

import argparse
import sys

from . import campaign
from .engine import drazin, integer_drazin, modular_drazin
from .errors import DrazinKitError, NotDrazinInvertible
from .matrix import Matrix, format_matrix_text, parse_matrix_text
from .scalars import Domain, Kind, ModularInt

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _scalar_block(domain: Domain, value) -> str:
    return format_matrix_text(Matrix(1, 1, [value], domain))


def cmd_drazin(args) -> int:
    try:
        with open(args.file, encoding="ascii") as fh:
            a = parse_matrix_text(fh.read())
    except (OSError, UnicodeDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if not a.is_square:
        print(f"error: {a.rows}x{a.cols} matrix is not square", file=sys.stderr)
        return EXIT_USAGE
    d = a.domain
    try:
        if d.is_field:
            res = drazin(a)
            blocks = (format_matrix_text(res.d), res.index, format_matrix_text(res.pi))
        elif a.rows == 1:
            x = a.entries[0]
            res = integer_drazin(x) if d.kind is Kind.INTEGERS else modular_drazin(ModularInt(x, d.modulus))
            blocks = (_scalar_block(d, int(res.d)), res.index, _scalar_block(d, int(res.pi)))
        else:
            print(f"error: Drazin inverses of matrices over {d} are not supported", file=sys.stderr)
            return EXIT_USAGE
    except NotDrazinInvertible:
        print("NotDrazinInvertible")
        return EXIT_FAIL
    print("# drazin inverse")
    print(blocks[0], end="")
    print(f"# index {blocks[1]}")
    print("# spectral idempotent")
    print(blocks[2], end="")
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.all:
        theorems = campaign.THEOREM_IDS
    else:
        if args.theorem not in campaign.THEOREM_IDS:
            print(f"error: unknown theorem {args.theorem!r}", file=sys.stderr)
            return EXIT_USAGE
        theorems = (args.theorem,)
    domains = (Domain.from_tag(args.domain),) if args.domain else campaign.DEFAULT_DOMAINS
    dims = (args.dim,) if args.dim else campaign.DEFAULT_DIMS
    if args.domain and not args.all:
        # an explicit request for an inapplicable cell is a usage error
        campaign.verify(theorems[0], domains[0], dims[0], 0, args.seed)
    progress = None
    if args.progress:
        def progress(rep):
            mark = "ok" if rep.passed else f"FAIL({len(rep.failures)})"
            print(f"{rep.theorem:6} {rep.domain:6} n={rep.dimension} {mark} {rep.elapsed_ms:.0f}ms", file=sys.stderr)
    result = campaign.verify_all(theorems, domains, dims, args.trials, args.seed, progress)
    if len(result["reports"]) == 1 and not args.all:
        out = result["reports"][0]
    else:
        out = result
    print(campaign.dumps(out))
    return EXIT_OK if result["pass"] else EXIT_FAIL


def cmd_oracle(args) -> int:
    report = campaign.oracle(Domain.from_tag(args.domain), args.dim)
    print(campaign.dumps(report))
    return EXIT_OK if report["pass"] else EXIT_FAIL


def cmd_counterexample(args) -> int:
    report = campaign.counterexample()
    print(campaign.dumps(report))
    return EXIT_OK if report["pass"] else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="drazinkit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("drazin", help="Drazin inverse, index and spectral idempotent of a matrix file")
    p.add_argument("file")
    p.set_defaults(func=cmd_drazin)

    p = sub.add_parser("verify", help="seeded identity campaign (JSON report)")
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--theorem", help=", ".join(campaign.THEOREM_IDS))
    which.add_argument("--all", action="store_true")
    p.add_argument("--domain", help="Q, GF:<p>, Zn:<n> or Z (default: GF:2,3,7,13 and Q)")
    p.add_argument("--dim", type=int, help="matrix dimension (default: 1..5)")
    p.add_argument("--trials", type=int, default=campaign.DEFAULT_TRIALS)
    p.add_argument("--seed", type=int, default=campaign.DEFAULT_SEED)
    p.add_argument("--progress", action="store_true", help="per-cell progress on stderr")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="engine vs exhaustive search")
    p.add_argument("--domain", required=True)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--exhaustive", action="store_true", required=True)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("counterexample", help="reproduce the two counterexamples")
    p.set_defaults(func=cmd_counterexample)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DrazinKitError as exc:
        # anything not caught as a mathematical failure is an input problem
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
