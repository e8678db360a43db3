"""Command-line front end.

Exit codes: 0 success, 1 verification failure / not extendable / attack
estimate out of tolerance, 2 usage or input error, 3 internal inconsistency.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import warnings

from .arcs import (
    AxiomViolation,
    DegenerateParametersWarning,
    ExtensionError,
    classify_pair_spans,
    dualize,
    element_pencils,
    extend_deficient,
    verify,
    verify_t_d1_hypotheses,
)
from .linalg import format_subspace
from .sharing import (
    AttackEstimate,
    InsufficientSharesError,
    ReconstructionError,
    deal,
    deal_twisted_cubic,
    format_public,
    format_recovered,
    format_secret,
    format_share,
    parse_public,
    parse_share,
    reconstruct,
    simulate_attack,
    twisted_cubic_secret,
)
from .veronese import (
    Construction2ConditionWarning,
    VeroneseContext,
    build_dual_arc,
    construction_order,
    family_nucleus,
    format_family,
    read_family,
    write_family,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_AXIOM = 0, 1, 2, 3


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="ascii") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_construct(args) -> int:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", DegenerateParametersWarning)
        ctx = VeroneseContext.of(args.q, args.n, args.d)
        fam = build_dual_arc(ctx)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    if args.arc:
        fam = dualize(fam)
    _emit(format_family(fam), args.out)
    print(f"params={' '.join(map(str, fam.params))} count={len(fam)} kind={fam.kind}",
          file=sys.stderr if not args.out else sys.stdout)
    return EXIT_OK


def cmd_verify(args) -> int:
    fam = read_family(args.input)
    rep = verify(fam, mode=args.mode, k=args.samples, seed=args.seed)
    sys.stdout.write(rep.to_text() if args.text else rep.to_keyvalue())
    ok = rep.axioms_hold
    if args.delta is not None:
        hyp = verify_t_d1_hypotheses(fam, args.delta)
        sys.stdout.write(hyp.to_keyvalue())
        ok = ok and hyp.all_hold
        if args.diagnostics:
            classes = classify_pair_spans(fam, args.delta)
            big = [c for c in classes if c.kind == "big"]
            print(f"pair_spans={len(classes)} big={len(big)}")
            for p in element_pencils(fam, classes):
                print(f"element={p.index} big_spans={p.big_span_count} concurrent={str(p.concurrent).lower()} "
                      f"at_contact_point={str(p.at_contact_point).lower()} deficiency_sum={p.deficiency_sum}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_dualize(args) -> int:
    fam = read_family(args.input)
    _emit(format_family(dualize(fam)), args.out)
    return EXIT_OK


def _with_nucleus(fam):
    nuc = family_nucleus(fam)
    if nuc is None:
        return None, None
    return nuc, fam.extended([nuc])


def cmd_extend(args) -> int:
    fam = read_family(args.input)
    try:
        full = extend_deficient(fam, args.delta, check_hypotheses=not args.skip_hypotheses)
    except ExtensionError as exc:
        print(f"not extendable: {exc}", file=sys.stderr)
        return EXIT_FAIL
    ref = construction_order(full)
    if ref is not None:
        full = ref
    if args.append_nucleus:
        nuc, ext = _with_nucleus(full)
        if nuc is None:
            print("no nucleus: the contact points span more than an element", file=sys.stderr)
            return EXIT_FAIL
        full = ext
    _emit(format_family(full), args.out)
    return EXIT_OK


def cmd_nucleus(args) -> int:
    fam = read_family(args.input)
    nuc, ext = _with_nucleus(fam)
    if nuc is None:
        print("not extendable: the contact points span more than an element (q odd)")
        return EXIT_FAIL
    rep = verify(ext, mode=args.mode, k=args.samples, seed=args.seed)
    print(f"nucleus_dim={nuc.dim} size={len(ext)} dual_hyperoval={str(rep.axioms_hold).lower()}")
    sys.stdout.write(format_subspace(nuc))
    if args.out:
        write_family(ext, args.out)
    return EXIT_OK if rep.axioms_hold else EXIT_FAIL


def cmd_deal(args) -> int:
    arc = read_family(args.arc)
    if arc.kind != "arc":
        arc = dualize(arc)
    bundle = deal(arc, args.scheme, seed=args.seed)
    os.makedirs(args.out_dir, exist_ok=True)
    for pid in sorted(bundle.shares):
        _emit(format_share(bundle, pid), os.path.join(args.out_dir, f"share_{pid}.txt"))
    _emit(format_public(bundle), os.path.join(args.out_dir, "public.txt"))
    if args.emit_secret:
        _emit(format_secret(bundle), os.path.join(args.out_dir, "secret.txt"))
    print(f"scheme={bundle.params.variant} k={bundle.params.k} participants={len(bundle.shares)} dir={args.out_dir}")
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    public = None
    params = None
    if args.public:
        with open(args.public, encoding="ascii") as fh:
            params, public = parse_public(fh.read())
    shares = []
    for path in args.shares:
        with open(path, encoding="ascii") as fh:
            p, _, S = parse_share(fh.read())
        params = params or p
        shares.append(S)
    if params is None:
        print("no shares given", file=sys.stderr)
        return EXIT_USAGE
    try:
        secret = reconstruct(params, shares, public)
    except InsufficientSharesError as exc:
        print(f"insufficient shares: {exc} (span dimension {exc.span_dim})", file=sys.stderr)
        return EXIT_FAIL
    except ReconstructionError as exc:
        print(f"reconstruction failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    _emit(format_recovered(params, secret), args.out)
    return EXIT_OK


def _print_table(estimates) -> bool:
    print(AttackEstimate.header())
    for est in estimates:
        print(est.row())
    return all(e.within_tolerance for e in estimates)


def cmd_simulate(args) -> int:
    arc = read_family(args.arc)
    if arc.kind != "arc":
        arc = dualize(arc)
    bundle = deal(arc, args.scheme, seed=args.seed)
    top = bundle.params.k
    rows = [simulate_attack(bundle, i, args.trials, seed=args.seed + 1 + i) for i in range(top)]
    return EXIT_OK if _print_table(rows) else EXIT_FAIL


def cmd_cubic_demo(args) -> int:
    ctx = VeroneseContext.of(args.q, 2, 2)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", Construction2ConditionWarning)
        if args.trials:
            bundle, demo = deal_twisted_cubic(ctx, seed=args.seed)
        else:
            demo = twisted_cubic_secret(ctx, seed=args.seed)
    print(f"q={demo.q}: intersection points on A([1,0,0]) (basis e111 e112 e122 e222)")
    for a, row in zip(demo.parameters, demo.local_points):
        print(f"  a={a}: [{', '.join(ctx.spec.format_code(int(c)) for c in row)}]")
    print(f"twisted_cubic={str(demo.is_twisted_cubic).lower()} no_four_coplanar={str(demo.no_four_coplanar).lower()}")
    print("secret plane u.z = 0 with u = [" + ", ".join(ctx.spec.format_code(c) for c in demo.plane_equation) + "]")
    print("leak profile: " + ", ".join(f"p{i}={p}" for i, p in enumerate(demo.leak_profile)))
    ok = demo.is_twisted_cubic and demo.no_four_coplanar
    if args.trials:
        rows = [simulate_attack(bundle, i, args.trials, seed=args.seed + 1 + i) for i in range(4)]
        ok = _print_table(rows) and ok
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dualarc", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build the Veronesean dual arc {D(P)}")
    p.add_argument("--q", type=int, required=True, help="field order (prime power)")
    p.add_argument("--n", type=int, required=True, help="dimension of the source space PG(n, q)")
    p.add_argument("--d", type=int, required=True, help="order of the dual arc")
    p.add_argument("--arc", action="store_true", help="write the dual generalised arc {A(P)} instead")
    p.add_argument("--out", help="output family file (default: stdout)")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="check the (dual) arc axioms and regularity")
    p.add_argument("input")
    p.add_argument("--mode", choices=("exhaustive", "sampled"), default="exhaustive")
    p.add_argument("--samples", type=int, default=500, help="subsets per size in sampled mode")
    p.add_argument("--seed", type=int, default=None, help="sampling seed (default: fixed)")
    p.add_argument("--delta", type=int, default=None, help="also check the order-1 extension hypotheses")
    p.add_argument("--diagnostics", action="store_true", help="with --delta: print pair-span diagnostics")
    p.add_argument("--text", action="store_true", help="human-readable report instead of key=value")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("dualize", help="elementwise orthogonal complement")
    p.add_argument("input")
    p.add_argument("--out")
    p.set_defaults(func=cmd_dualize)

    p = sub.add_parser("extend", help="complete an order-1 dual arc missing delta elements")
    p.add_argument("input")
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--out")
    p.add_argument("--append-nucleus", action="store_true", help="q even: also append the nucleus")
    p.add_argument("--skip-hypotheses", action="store_true", help="do not pre-check the hypotheses")
    p.set_defaults(func=cmd_extend)

    p = sub.add_parser("nucleus", help="append the nucleus of an order-1 dual arc (q even)")
    p.add_argument("input")
    p.add_argument("--out", help="write the enlarged family here")
    p.add_argument("--mode", choices=("exhaustive", "sampled"), default="exhaustive")
    p.add_argument("--samples", type=int, default=500)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_nucleus)

    p = sub.add_parser("deal", help="deal shares from a generalised arc")
    p.add_argument("--arc", required=True, help="arc family file (a dual arc is dualized first)")
    p.add_argument("--scheme", type=int, choices=(1, 2), default=1)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--emit-secret", action="store_true", help="also write secret.txt")
    p.set_defaults(func=cmd_deal)

    p = sub.add_parser("reconstruct", help="recover the secret from share files")
    p.add_argument("shares", nargs="+")
    p.add_argument("--public", help="public.txt (required for scheme 2)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("simulate", help="Monte-Carlo attack table for i = 0..k-1 shares")
    p.add_argument("--arc", required=True)
    p.add_argument("--scheme", type=int, choices=(1, 2), default=1)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--trials", type=int, default=30000)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("cubic-demo", help="twisted-cubic secret plane walkthrough (n = d = 2)")
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--trials", type=int, default=0, help="also simulate attacks with this many trials")
    p.set_defaults(func=cmd_cubic_demo)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except AxiomViolation as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_AXIOM
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
