"""Command line front end.

Exit codes: 0 success, 2 bad parameters or usage, 3 verification failed or
inconclusive (or a request could not be served), 4 enumeration budget
exceeded.
"""

from __future__ import annotations

import argparse
import os
import sys
import warnings

from geobatch import batch_code as bc
from geobatch import bounds, geometry
from geobatch.errors import AssignmentFailure, BudgetExceeded, GeoBatchError, NotPrimePower
from geobatch.finite_field import field_new

EXIT_OK = 0
EXIT_PARAMS = 2
EXIT_VERIFY = 3
EXIT_BUDGET = 4

BUDGET_ENV = "GEOBATCH_BUDGET"


def _default_budget(fallback: int) -> int:
    return int(os.environ.get(BUDGET_ENV, fallback))


def _emit_warnings(caught) -> None:
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)


def _write_or_print(text: str, path: str | None) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(text)
        print(f"wrote {path}")
    else:
        sys.stdout.write(text)


def cmd_construct_explicit(args) -> int:
    q, ell, k = args.q, args.ell, args.k
    field = field_new(q)
    limit = bounds.explicit_k_limit(ell, q)
    if not 0 < k <= limit:
        print(f"error: need 0 < k <= floor(q/l^2) = {limit}, got k={k}", file=sys.stderr)
        return EXIT_PARAMS
    coll = geometry.construction1(field, ell, include_zero_block=args.include_zero_block)
    m = ell * k
    if m > coll.m:
        print(f"error: m = l*k = {m} exceeds the {coll.m} subspaces available", file=sys.stderr)
        return EXIT_PARAMS
    budget = args.budget or _default_budget(geometry.DEFAULT_BUDGET)
    if q ** (2 * ell + 1) <= budget:
        coll = geometry.certify(coll, budget)
    else:
        print("warning: collection too large to certify; using the claimed level L = l", file=sys.stderr)
    code = bc.build_explicit(coll.prefix(m))
    L = coll.certified_L
    print(f"n = {code.n} = q^(2l+1) = {q}^{2 * ell + 1}")
    print(f"r = {code.r} = m*q^(l+1) = {m}*{q ** (ell + 1)}")
    print(f"N = {code.N} = n + r")
    print(f"k = {code.meta['k']} = floor(m/L) = floor({m}/{L})")
    print(f"L = {L} ({coll.certification})")
    print(f"bound l*k*q^(l+1) = {bounds.explicit_redundancy(ell, k, q)}")
    if args.out:
        bc.write_code(code, args.out)
        print(f"wrote {args.out}")
    return EXIT_OK


def cmd_construct_random(args) -> int:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        code = bc.build_random(args.q, args.k, args.seed, args.p1, args.p2, relax_k=not args.strict_k)
    _emit_warnings(caught)
    n = code.n
    p1 = float(code.meta["p1"])
    print(f"n = {n} = q^2 = {args.q}^2")
    print(f"p1 = {p1:.6g}, p2 = {float(code.meta['p2']):.6g}, seed = {args.seed}")
    print(f"r = {code.r} (expected p1*(q^2+q) = {p1 * (n + args.q):.1f})")
    print(f"target 108*k^(3/2)*sqrt(n)*ln(n) = {bc.random_target(n, args.k):.1f}")
    if args.out:
        bc.write_code(code, args.out)
        print(f"wrote {args.out}")
    return EXIT_OK


def cmd_verify(args) -> int:
    code = bc.read_code(args.code)
    budget = args.budget or _default_budget(bc.DEFAULT_VERIFY_BUDGET)
    v = bc.verify_batch(code, args.k, mode=args.mode, allow_singleton=not args.no_singleton, budget=budget)
    print(f"verdict: {v.status}")
    print(f"{v.checked} multisets verified (of {v.total} = C(n+k-1, k))")
    if v.witness is not None:
        print(f"witness: {','.join(map(str, v.witness))}")
    return EXIT_OK if v.holds else EXIT_VERIFY


def cmd_serve(args) -> int:
    code = bc.read_code(args.code)
    req = bc.parse_request(args.request)
    try:
        a = bc.greedy_assign(code, req, allow_singleton=args.allow_singleton, strict_paper=args.strict_paper)
    except AssignmentFailure as exc:
        print(f"failure: group={exc.group} target={exc.target} found={exc.found} needed={exc.needed}")
        return EXIT_VERIFY
    for line in a.lines():
        print(line)
    return EXIT_OK


def cmd_nice_check(args) -> int:
    field = field_new(args.q)
    coll = geometry.construction1(field, args.ell, args.m, include_zero_block=args.zero_block)
    pairwise = geometry.check_pairwise(coll)
    print(f"m = {coll.m}")
    print(f"pairwise trivial: {str(pairwise).lower()}")
    if not pairwise:
        return EXIT_VERIFY
    budget = args.budget or _default_budget(geometry.DEFAULT_BUDGET)
    coll = geometry.certify(coll, budget)
    L = coll.certified_L
    print(f"L* = {L}")
    print(f"m <= (L*+1)*q: {coll.m} <= {(L + 1) * args.q}")
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(geometry.to_text(coll))
        print(f"wrote {args.out}")
    return EXIT_OK if L <= args.ell else EXIT_VERIFY


def cmd_nice_search(args) -> int:
    m_max, witness = geometry.max_nice_collection(field_new(args.q), args.ell, args.L)
    print(f"m_max = {m_max} <= {(args.L + 1) * args.q} = (L+1)*q")
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(geometry.to_text(witness))
        print(f"wrote {args.out}")
    return EXIT_OK


def cmd_bounds_report(args) -> int:
    _write_or_print(bounds.bound_report(args.n, args.k).to_csv(), args.out)
    return EXIT_OK


def cmd_bounds_figure(args) -> int:
    _write_or_print(bounds.figure1_csv(), args.out)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARAMS, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="geobatch", description="Batch codes from finite geometry.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    construct = sub.add_parser("construct", help="build a code file")
    csub = construct.add_subparsers(dest="kind", required=True, parser_class=_Parser)

    ex = csub.add_parser("explicit", help="coset code of a nice subspace collection")
    ex.add_argument("--q", type=int, required=True)
    ex.add_argument("--ell", type=int, default=1)
    ex.add_argument("--k", type=int, required=True)
    ex.add_argument("--include-zero-block", action="store_true", help="add span{(1,0,...,0)} (ell = 1 only)")
    ex.add_argument("--budget", type=int, default=None, help="max q^(2l+1) for brute-force certification")
    ex.add_argument("--out")
    ex.set_defaults(func=cmd_construct_explicit)

    rnd = csub.add_parser("random", help="sampled subsets of affine-plane lines")
    rnd.add_argument("--q", type=int, required=True)
    rnd.add_argument("--k", type=int, required=True)
    rnd.add_argument("--seed", type=int, required=True)
    rnd.add_argument("--p1", type=float, default=None, help="line probability; default 36 k^1.5 ln(n)/sqrt(n), natural log, clamped to 1")
    rnd.add_argument("--p2", type=float, default=None, help="point probability; default 1/sqrt(8k)")
    rnd.add_argument("--strict-k", action="store_true", help="reject k >= q/12 instead of warning")
    rnd.add_argument("--out")
    rnd.set_defaults(func=cmd_construct_random)

    ver = sub.add_parser("verify", help="check the k-batch property over all multisets")
    ver.add_argument("--code", required=True)
    ver.add_argument("--k", type=int, required=True)
    ver.add_argument("--mode", choices=[bc.SIMPLE, "exhaustive-small"], default=bc.SIMPLE)
    ver.add_argument("--no-singleton", action="store_true", help="do not read a symbol's own systematic copy")
    ver.add_argument("--budget", type=int, default=None)
    ver.set_defaults(func=cmd_verify)

    srv = sub.add_parser("serve", help="assign recovering sets to a request like 5,5,9")
    srv.add_argument("--code", required=True)
    srv.add_argument("--request", required=True)
    srv.add_argument("--strict-paper", action="store_true", help="skip parities touching other requested symbols")
    srv.add_argument("--allow-singleton", action="store_true")
    srv.set_defaults(func=cmd_serve)

    nice = sub.add_parser("nice", help="nice subspace collections")
    nsub = nice.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    chk = nsub.add_parser("check", help="certify the Reed-Solomon collection by brute force")
    chk.add_argument("--q", type=int, required=True)
    chk.add_argument("--ell", type=int, default=1)
    chk.add_argument("--m", type=int, default=None)
    chk.add_argument("--zero-block", action="store_true")
    chk.add_argument("--budget", type=int, default=None)
    chk.add_argument("--out")
    chk.set_defaults(func=cmd_nice_check)
    srch = nsub.add_parser("search", help="exact maximum size of an L-nice collection")
    srch.add_argument("--q", type=int, required=True)
    srch.add_argument("--ell", type=int, default=1)
    srch.add_argument("--L", type=int, required=True)
    srch.add_argument("--out")
    srch.set_defaults(func=cmd_nice_search)

    bnd = sub.add_parser("bounds", help="redundancy bounds and plot data as CSV")
    bsub = bnd.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    rep = bsub.add_parser("report")
    rep.add_argument("--n", type=int, required=True)
    rep.add_argument("--k", type=int, required=True)
    rep.add_argument("--out")
    rep.set_defaults(func=cmd_bounds_report)
    fig = bsub.add_parser("figure")
    fig.add_argument("--out")
    fig.set_defaults(func=cmd_bounds_figure)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (GeoBatchError, NotPrimePower, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAMS


if __name__ == "__main__":
    sys.exit(main())
